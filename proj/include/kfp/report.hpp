#ifndef KFP_REPORT_HPP_
#define KFP_REPORT_HPP_

#include <string>

#include <nlohmann/json.hpp>

#include "kfp/assemble.hpp"
#include "kfp/exhaustion.hpp"
#include "kfp/grid.hpp"
#include "kfp/spaces.hpp"
#include "kfp/stochastic.hpp"
#include "kfp/variational.hpp"

namespace kfp {

// %.17g formatting used in CSV output so values round-trip exactly.
std::string format_g17(double v);

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const NormReport& r);
nlohmann::json to_json(const McEstimate& r);
nlohmann::json to_json(const MeasureEstimate& r);
nlohmann::json to_json(const MinimizerPair& r);  // scalars only, not fields
nlohmann::json to_json(const ConvexityReport& r);
nlohmann::json to_json(const ExhaustionResult& r);

// CSV: one row per active node, columns x_0..x_{m-1}, y_0.., t, value.
void write_field_csv(const Grid& g, const DiscreteField& u,
                     const std::string& path);

// Binary: magic "KFPFLD1\n", u32 m, per-axis u32 counts (x then y then t),
// then all node values as row-major (X fastest) little-endian doubles.
void write_field_binary(const Grid& g, const DiscreteField& u,
                        const std::string& path);
DiscreteField read_field_binary(const Grid& g, const std::string& path);

}  // namespace kfp

#endif  // KFP_REPORT_HPP_
