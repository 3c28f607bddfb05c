#pragma once
//
// The eight acceptance checks, each returning a JSON detail block.
//

#include <cstdint>
#include <string>
#include <vector>

#include "btharm/json_io.hpp"

namespace bt {

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  /// "desk" runs the full sample counts, "quick" a reduced smoke run.
  std::string profile = "desk";
  Limits limits{};
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string note;
  Json detail;
  double seconds = 0;
};

/// act(y_i w_i, chamber) against (sigma_empty, v_i) for every i, and optionally every face formula.
Json wij_verify(const Fq& F, int n, bool faces);

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});
Json criterion_json(const CriterionResult& r);

}  // namespace bt
