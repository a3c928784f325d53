#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "xplain/dt.hpp"
#include "xplain/explain.hpp"
#include "xplain/model_io.hpp"
#include "xplain/models.hpp"

namespace xplain::cli {

struct SolveOptions {
  std::string route = "auto";
  std::size_t cap_nodes = kDefaultNodeCap;
  std::size_t guard_features = kDefaultOracleGuard;
};

struct SolveResult {
  std::optional<Witness> witness;
  std::string route;
};

// Picks a route for the model and query and runs it.
SolveResult solve(const Model& model, const ExplanationQuery& q, const SolveOptions& options);

Json parameters_to_json(const Parameters& p);

// Inline JSON when the text starts with '{' or '[', otherwise a file path.
Json read_json_arg(const std::string& text);

struct BenchOptions {
  std::filesystem::path corpus;
  std::string query;
  std::optional<std::size_t> budget;
  std::size_t timeout_ms = 10'000;
  SolveOptions solve;
};

// CSV with one row per *.json model in the corpus, in file name order.
std::string run_bench(const BenchOptions& options);

}  // namespace xplain::cli
