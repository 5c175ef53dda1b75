#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "zlog/continuation.hpp"
#include "zlog/motive_data.hpp"
#include "zlog/point_counts.hpp"
#include "zlog/pseudo_divisor.hpp"

namespace zlog {

using Json = nlohmann::ordered_json;

/// A parsed model config. Every kind yields spectral data; all but raw-without-counts
/// and explicit varieties also yield a full ZlogModel.
struct ModelConfig {
  std::string kind;
  Json doc;
  std::optional<ZlogModel> model;
  SpectralData data;        // the datum used by divisor / monodromy / verify
  TruncationParams trunc;
  std::optional<std::uint64_t> q;
  std::function<CountSequence(int)> counts;  // empty when the config carries no counts

  // numeric options, all overridable from the command line
  std::optional<Window> window;
  int res = 200;
  double tol = 1e-12;
  std::optional<std::string> out;
};

ModelConfig parse_config(const Json& doc);
ModelConfig load_config(const std::string& path);

WeilNumberSet parse_weil(const Json& doc, bool abelian);
VarietySpec parse_variety(const Json& doc);

/// JSON text with every float rendered to 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);
Json complex_json(cplx z);

/// Binary PGM (P5) of phase arg(v) mapped to [0, 255]; non-finite values are 0.
void write_phase_pgm(std::ostream& out, int width, int height, const std::vector<cplx>& values);

}  // namespace zlog
