#include "lzopt/io.hpp"

#include "lzopt/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

namespace lzopt::io {

namespace {

double parse_real(std::string_view text, std::string_view whole) {
    const std::string s(text);
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw DomainError("cannot parse number '" + s + "' in '" + std::string(whole) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

cplx parse_complex(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw DomainError("empty complex literal");
    if (s.back() != 'i') {
        return {parse_real(s, text), 0.0};
    }
    const std::string_view body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not a leading sign or part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        return {0.0, parse_real(body, text)};
    }
    return {parse_real(body.substr(0, split), text), parse_real(body.substr(split), text)};
}

std::pair<cplx, cplx> parse_amplitudes(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
        throw DomainError("state literal must have exactly two comma-separated amplitudes: '" +
                          std::string(text) + "'");
    }
    return {parse_complex(text.substr(0, comma)), parse_complex(text.substr(comma + 1))};
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const LzParams& p) {
    return {{"gamma", p.gamma}, {"omega", p.omega}, {"c", optional_number(p.c)},
            {"omega_max", optional_number(p.omega_max)}};
}

LzParams lz_params_from_json(const json& j) {
    LzParams p;
    p.gamma = j.value("gamma", 0.0);
    p.omega = j.at("omega").get<double>();
    p.c = number_or_null(j, "c");
    p.omega_max = number_or_null(j, "omega_max");
    return p;
}

json to_json(const TminResult& r, const std::optional<QslReport>& qsl) {
    json j{{"t_min", r.t_min},
           {"regime", std::string(to_string(r.regime))},
           {"t_c", optional_number(r.t_c)},
           {"t_off", optional_number(r.t_off)},
           {"alpha_in", optional_number(r.alpha_in)},
           {"alpha_f", optional_number(r.alpha_f)},
           {"t_qsl_overlap", nullptr},
           {"t_qsl_variance", nullptr}};
    if (qsl) {
        j["t_qsl_overlap"] = qsl->t_qsl_overlap;
        if (qsl->variance_defined) j["t_qsl_variance"] = qsl->t_qsl_variance;
    }
    return j;
}

json to_json(const QslReport& q) {
    return {{"t_min", q.t_min},
            {"t_qsl_overlap", q.t_qsl_overlap},
            {"t_qsl_variance", q.variance_defined ? json(q.t_qsl_variance) : json(nullptr)},
            {"variance_defined", q.variance_defined},
            {"t_fleming", std::isfinite(q.t_fleming) ? json(q.t_fleming) : json(nullptr)},
            {"energy_spread", q.energy_spread}};
}

json to_json(const Segment& s) {
    json j{{"kind", ""}, {"gamma_start", 0.0}, {"gamma_end", 0.0}, {"omega", 0.0}, {"duration", 0.0},
           {"area", 0.0}};
    if (const auto* d = std::get_if<DeltaPulse>(&s)) {
        j["kind"] = "delta";
        j["area"] = d->area;
    } else if (const auto* c = std::get_if<ConstantSegment>(&s)) {
        j["kind"] = "constant";
        j["gamma_start"] = c->gamma;
        j["gamma_end"] = c->gamma;
        j["omega"] = c->omega;
        j["duration"] = c->duration;
    } else {
        const auto& r = std::get<RampSegment>(s);
        j["kind"] = "ramp";
        j["gamma_start"] = r.gamma_start;
        j["gamma_end"] = r.gamma_end;
        j["omega"] = r.omega;
        j["duration"] = r.duration;
        j["shape"] = std::string(to_string(r.shape));
    }
    return j;
}

Segment segment_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "delta") {
        return DeltaPulse{j.at("area").get<double>()};
    }
    const double duration = j.at("duration").get<double>();
    if (!(duration >= 0.0)) throw DomainError("segment duration must be >= 0");
    if (kind == "constant") {
        return ConstantSegment{j.at("gamma_start").get<double>(), j.at("omega").get<double>(), duration};
    }
    if (kind == "ramp") {
        return RampSegment{j.at("gamma_start").get<double>(), j.at("gamma_end").get<double>(),
                           j.at("omega").get<double>(), duration,
                           ramp_shape_from_string(j.value("shape", std::string("linear")))};
    }
    throw DomainError("unknown segment kind '" + kind + "'");
}

json to_json(const Protocol& p) {
    json segs = json::array();
    for (const auto& s : p.segments) segs.push_back(to_json(s));
    return {{"regime", p.regime ? json(std::string(to_string(*p.regime))) : json(nullptr)},
            {"params", p.params ? to_json(*p.params) : json(nullptr)},
            {"total_duration", p.total_duration()},
            {"segments", segs}};
}

Protocol protocol_from_json(const json& j) {
    Protocol p;
    if (j.contains("regime") && !j.at("regime").is_null()) {
        p.regime = regime_from_string(j.at("regime").get<std::string>());
    }
    if (j.contains("params") && !j.at("params").is_null()) {
        p.params = lz_params_from_json(j.at("params"));
    }
    for (const auto& s : j.at("segments")) p.segments.push_back(segment_from_json(s));
    return p;
}

json to_json(const SearchResult& r) {
    return {{"reached", r.reached},     {"duration", r.duration}, {"fidelity", r.fidelity},
            {"alpha_in", r.alpha_in},   {"alpha_f", r.alpha_f},   {"t_c", r.t_c},
            {"t_off", r.t_off},         {"t_minus_c", r.t_minus_c}, {"protocol", to_json(r.protocol)}};
}

json to_json(const VerifyCheck& c) {
    return {{"name", c.name},         {"expected", c.expected}, {"found", c.found},
            {"tolerance", c.tolerance}, {"relative", c.relative}, {"pass", c.pass}};
}

void write_sweep_csv(std::ostream& os, const Sweep& sweep) {
    os << "c_over_omega,wTmin,wToff,two_wTc,regime\n";
    for (const auto& r : sweep.rows) {
        os << format_number(r.c_over_omega) << ',' << format_number(r.w_tmin) << ',' << format_number(r.w_toff)
           << ',' << format_number(r.two_w_tc) << ',' << to_string(r.regime) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
    os << "t,re_c0,im_c0,re_c1,im_c1,tau1,tau2,tau3\n";
    for (const auto& r : rows) {
        os << format_number(r.t) << ',' << format_number(r.psi[0].real()) << ','
           << format_number(r.psi[0].imag()) << ',' << format_number(r.psi[1].real()) << ','
           << format_number(r.psi[1].imag());
        if (r.angles) {
            os << ',' << format_number(r.angles->tau1) << ',' << format_number(r.angles->tau2) << ','
               << format_number(r.angles->tau3);
        } else {
            os << ",,,";
        }
        os << '\n';
    }
}

}  // namespace lzopt::io
