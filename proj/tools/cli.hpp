#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdlocal/estimators.hpp"
#include "mdlocal/exact_oracle.hpp"
#include "mdlocal/graph.hpp"
#include "mdlocal/matching_marginal.hpp"

namespace mdlocal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;
inline constexpr int kExitUncertified = 3;
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

Json to_json(const EstimateResult& result, bool verbose);
Json to_json(const MarginalEstimate& estimate);
Json to_json(const ExactStats& stats, const Graph& graph);
Json graph_summary(const Graph& graph);

// Runs one subcommand; `args` excludes the program name. Reports go to `out`,
// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdlocal::cli
