// Command-line driver: `pilab list` shows the experiment catalog,
// `pilab run <experiment> [--key value]...` runs one and writes its
// data/report/sidecar files.

#include <cstdio>
#include <exception>
#include <string>

#include "pilab/experiments.hpp"

namespace {

int usage(const char* prog) {
  std::fprintf(stderr,
               "usage: %s list\n"
               "       %s run <experiment> [--key value | --key=value]...\n",
               prog, prog);
  return 2;
}

int cmd_list() {
  for (const auto& e : pilab::experiment_catalog()) {
    std::printf("%s\n  %s\n  probes: %s\n  defaults:", e.name.c_str(),
                e.description.c_str(), e.anchor.c_str());
    for (const auto& [k, v] : e.defaults)
      std::printf(" %s=%s", k.c_str(), v.c_str());
    std::printf("\n\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage(argv[0]);
  std::string cmd = argv[1];
  if (cmd == "list") return cmd_list();
  if (cmd != "run") return usage(argv[0]);

  if (argc < 3) {
    std::fprintf(stderr, "error: run needs an experiment name\n");
    return 2;
  }
  const pilab::Experiment* e = pilab::find_experiment(argv[2]);
  if (!e) {
    std::fprintf(stderr, "error: unknown experiment '%s' (see '%s list')\n",
                 argv[2], argv[0]);
    return 2;
  }

  pilab::Config overrides;
  for (int i = 3; i < argc; ++i) {
    std::string a = argv[i];
    if (a.rfind("--", 0) != 0) {
      std::fprintf(stderr, "error: expected --key, got '%s'\n", a.c_str());
      return 2;
    }
    a = a.substr(2);
    std::string key, val;
    if (auto eq = a.find('='); eq != std::string::npos) {
      key = a.substr(0, eq);
      val = a.substr(eq + 1);
    } else {
      key = a;
      if (i + 1 >= argc) {
        std::fprintf(stderr, "error: missing value for --%s\n", key.c_str());
        return 2;
      }
      val = argv[++i];
    }
    overrides[key] = val;
  }

  try {
    pilab::Config cfg = pilab::merge_config(*e, overrides);
    std::string outdir = pilab::resolve_outdir(cfg);
    for (const auto& p : pilab::run_experiment(*e, cfg, outdir))
      std::printf("wrote %s\n", p.c_str());
    return 0;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
}
