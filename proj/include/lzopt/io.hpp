#pragma once

#include "lzopt/analytic.hpp"
#include "lzopt/dynamics.hpp"
#include "lzopt/oracle.hpp"
#include "lzopt/protocol.hpp"
#include "lzopt/states.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace lzopt::io {

using nlohmann::json;

/// Parses a complex literal: "0.5", "-2i", "1e-3-0.25i", "i".
cplx parse_complex(std::string_view text);

/// Parses "c0,c1" into raw (unnormalized) amplitudes. Throws DomainError on bad syntax.
std::pair<cplx, cplx> parse_amplitudes(std::string_view text);

/// "%.17g"
std::string format_number(double v);

json to_json(const LzParams& p);
LzParams lz_params_from_json(const json& j);

/// Flat record with keys t_min, regime, t_c, t_off, alpha_in, alpha_f,
/// t_qsl_overlap, t_qsl_variance (null where not applicable or undefined).
json to_json(const TminResult& r, const std::optional<QslReport>& qsl = std::nullopt);

json to_json(const QslReport& q);

json to_json(const Segment& s);
Segment segment_from_json(const json& j);

/// {"regime", "params", "segments": [{kind, gamma_start, gamma_end, omega, duration, area, shape}]}
json to_json(const Protocol& p);
Protocol protocol_from_json(const json& j);

json to_json(const SearchResult& r);
json to_json(const VerifyCheck& c);

/// Header "c_over_omega,wTmin,wToff,two_wTc,regime".
void write_sweep_csv(std::ostream& os, const Sweep& sweep);

/// Header "t,re_c0,im_c0,re_c1,im_c1,tau1,tau2,tau3"; angles empty where undefined.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows);

}  // namespace lzopt::io
