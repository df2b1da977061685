// File formats: channel, factorization and linear-system JSON, region and
// boundary CSV, minimal SVG, gap-certificate JSON.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "confbc/channels.hpp"
#include "confbc/dm_bounds.hpp"
#include "confbc/gaussian_bounds.hpp"
#include "confbc/regions.hpp"

namespace confbc {

/// Malformed or inconsistent input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

/// Parses a file as JSON, turning parse failures into FormatError.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// "type": "dm" needs x_card and transition (|X| rows over (y1,y2), y2
/// fastest); y1_card/y2_card are optional when the row length is a perfect
/// square. "type": "gaussian" needs a, b, lambda, power. c12/c21 default 0.
AnyChannel channel_from_json(const Json& j);
Json channel_to_json(const AnyChannel& ch);

/// {"cards": {"u","v","w","x"}, "aux": [flat P(u,v,w,x), x fastest],
///  "q1": [[...]] rows (u,w,y1), "q2": [[...]] rows (w,y2) or (y2)}.
/// A q2 with |Y2| rows is lifted so that it ignores w.
AuxFactorization factorization_from_json(const Json& j, const DmBroadcastChannel& ch);
Json factorization_to_json(const AuxFactorization& f);

/// {"variables": [...], "rows": [{"coeffs": [...], "rhs": x}, ...]}.
LinearSystem system_from_json(const Json& j);
Json system_to_json(const LinearSystem& sys);

/// 9 significant digits; "inf" / "-inf" for infinities.
std::string format_double(double v);

/// dir0,dir1,dir2,support with dir2 = 0 for 2-D envelopes.
std::string region_csv(const RegionEnvelope& env);
/// Inverse of region_csv. The envelope is 2-D when every dir2 is 0.
RegionEnvelope region_from_csv(const std::string& text);
/// R0,R1 rows in increasing R0.
std::string boundary_csv(const std::vector<Eigen::Vector2d>& walk);
/// viewBox, two axes, one polyline through the walk, axis labels.
std::string boundary_svg(const std::vector<Eigen::Vector2d>& walk, const std::string& title);

/// [{theorem, row_pair, worst_params: {alpha, beta}, slack_bits, allowed_bits}, ...]
Json gap_certificate_json(const GapCertificate& cert);

}  // namespace confbc
