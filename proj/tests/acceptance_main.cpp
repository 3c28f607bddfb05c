#include <cstdio>
#include <cstring>
#include <fstream>

#include "btharm/acceptance.hpp"

int main(int argc, char** argv) {
  bt::AcceptanceOptions opt;
  const char* report = nullptr;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--quick")) opt.profile = "quick";
    if (!std::strcmp(argv[i], "--report") && i + 1 < argc) report = argv[++i];
  }
  bool all = true;
  bt::Json out = bt::Json::array();
  for (int id = 1; id <= 8; ++id) {
    auto r = bt::run_criterion(id, opt);
    all = all && r.pass;
    std::printf("criterion %d: %s  %s (%.1fs)%s%s\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(), r.seconds,
                r.note.empty() ? "" : "  note: ", r.note.c_str());
    if (!r.pass) std::printf("%s\n", r.detail.dump(2).c_str());
    std::fflush(stdout);
    out.push_back(bt::criterion_json(r));
  }
  if (report) std::ofstream(report) << out.dump(2) << '\n';
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
