// conecg: column generation bounds from the command line.

#include "conecg/generators.hpp"
#include "conecg/random.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace conecg;

struct RunSpec {
  std::string command;
  std::string input;
  std::string gen;
  std::string mode = "lp";
  std::string pricing = "eig";
  std::size_t t1 = 300000;
  std::size_t t2 = 0;  // 0: per-command default
  int cuts = 1;
  int max_iters = 20;
  double time_limit = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  std::string out;
  int jobs = 1;
  int instances = 1;
  bool deterministic = false;
  bool amgm = false;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int to_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Failure("bad " + what + " '" + s + "'");
  return v;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Failure("bad " + what + " '" + s + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure("cannot open '" + path + "'");
  return in;
}

CgConfig cg_config(const RunSpec& spec) {
  CgConfig cfg;
  cfg.mode = spec.mode == "socp" ? CgMode::SOCP : CgMode::LP;
  cfg.cuts_per_iter = spec.cuts;
  cfg.max_iters = spec.max_iters;
  cfg.time_limit_s = spec.time_limit;
  return cfg;
}

Pricing pricing_of(const RunSpec& spec) { return spec.pricing == "triples" ? Pricing::Triples : Pricing::Eig; }

struct Output {
  std::vector<std::string> comments;
  CgTrace trace;
  std::string summary_header;
  std::string summary;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string generic_summary(const std::string& name, const RunSpec& spec, const CgTrace& t) {
  return name + ',' + spec.mode + ',' + spec.pricing + ',' + fmt(t.final_bound()) + ',' +
         std::to_string(t.records.empty() ? 0 : t.records.back().iter) + ',' + (t.converged() ? "true" : "false") +
         ',' + to_string(t.termination);
}

const char* kGenericHeader = "instance,mode,pricing,final_bound,iters,converged,termination";

Output run_sdp(const RunSpec& spec, std::uint64_t seed) {
  Output o;
  SdpProblem prob;
  std::string name;
  if (!spec.input.empty()) {
    std::ifstream in = open_input(spec.input);
    prob = read_sdp(in);
    name = spec.input;
  } else {
    const auto p = split(spec.gen, ':');
    if (p.size() != 2 || p[0] != "spectra") throw Failure("sdp generator must be spectra:n, got '" + spec.gen + "'");
    prob = gen_spectrahedron(to_int(p[1], "size"), seed);
    name = spec.gen;
  }
  o.trace = run(prob, cg_config(spec));
  o.comments.push_back("certificate_valid=" + std::string(o.trace.certificate.valid ? "true" : "false"));
  o.summary_header = kGenericHeader;
  o.summary = generic_summary(name, spec, o.trace);
  return o;
}

Output run_polymin(const RunSpec& spec, std::uint64_t seed) {
  Output o;
  Poly p;
  std::string name;
  if (!spec.input.empty()) {
    std::ifstream in = open_input(spec.input);
    p = read_poly(in);
    name = spec.input;
  } else {
    const auto g = split(spec.gen, ':');
    if (g.size() == 2 && g[0] == "quartic")
      p = gen_quartic(to_int(g[1], "variable count"), seed);
    else if (g.size() == 1 && g[0] == "motzkin")
      p = motzkin();
    else
      throw Failure("polymin generator must be quartic:n or motzkin, got '" + spec.gen + "'");
    name = spec.gen;
  }
  PolyCgConfig cfg;
  cfg.cg = cg_config(spec);
  cfg.pricing = pricing_of(spec);
  cfg.t1 = spec.t1;
  cfg.t2 = spec.t2 ? spec.t2 : 5000;
  cfg.amgm = spec.amgm;
  o.trace = cg_polymin(p, cfg);
  o.summary_header = kGenericHeader;
  o.summary = generic_summary(name, spec, o.trace);
  return o;
}

Graph named_graph(const std::string& spec, std::uint64_t seed) {
  const auto g = split(spec, ':');
  if (g.size() == 3 && g[0] == "er") return gen_er(to_int(g[1], "node count"), to_double(g[2], "probability"), seed);
  if (g.size() == 1 && g[0] == "petersen") return petersen();
  if (g.size() == 1 && g[0] == "petersen-complement") return petersen_complement();
  if (g.size() == 2) {
    const int n = to_int(g[1], "node count");
    if (n < 0) throw Failure("negative node count");
    if (g[0] == "path") return path_graph(n);
    if (g[0] == "cycle") return cycle_graph(n);
    if (g[0] == "complete") return complete_graph(n);
    if (g[0] == "empty") return empty_graph(n);
  }
  throw Failure("unknown graph generator '" + spec + "'");
}

Output run_stableset(const RunSpec& spec, std::uint64_t seed) {
  Output o;
  Graph g;
  std::string name;
  if (!spec.input.empty()) {
    std::ifstream in = open_input(spec.input);
    g = read_dimacs(in);
    name = spec.input;
  } else {
    g = named_graph(spec.gen, seed);
    name = spec.gen;
  }
  StableCgConfig cfg;
  cfg.cg = cg_config(spec);
  cfg.pricing = pricing_of(spec);
  cfg.t1 = spec.t1;
  cfg.t2 = spec.t2 ? spec.t2 : 500;
  o.trace = cg_stableset(g, cfg);
  o.comments.push_back("nodes=" + std::to_string(g.n()) + " edges=" + std::to_string(g.m()));
  o.summary_header = summary_header();
  o.summary = summary_line(name, g, cfg.cg.mode, cfg.pricing, o.trace);
  return o;
}

Output run_one(const RunSpec& spec, std::uint64_t seed) {
  if (spec.command == "sdp") return run_sdp(spec, seed);
  if (spec.command == "polymin") return run_polymin(spec, seed);
  return run_stableset(spec, seed);
}

void emit(std::ostream& out, const RunSpec& spec, std::uint64_t seed, Output o) {
  std::vector<std::string> header = {
      "conecg " + spec.command,
      spec.input.empty() ? "gen=" + spec.gen : "input=" + spec.input,
      "seed=" + std::to_string(seed),
      std::string("rng=") + Rng::kDescription,
      "backend=ipm",
      "mode=" + spec.mode + " pricing=" + spec.pricing + " cuts=" + std::to_string(spec.cuts) +
          " max_iters=" + std::to_string(spec.max_iters),
      "termination=" + to_string(o.trace.termination),
  };
  header.insert(header.end(), o.comments.begin(), o.comments.end());
  if (spec.deterministic)
    for (auto& r : o.trace.records) r.elapsed_ms = 0;
  write_trace_csv(out, o.trace, header);
  out << "# summary: " << o.summary_header << '\n' << "# summary: " << o.summary << '\n';
}

int execute(const RunSpec& spec) {
  if (const char* backend = std::getenv("CONECG_BACKEND"); backend && std::string(backend) != "ipm" &&
                                                           std::string(backend) != "")
    throw Failure(std::string("unknown backend '") + backend + "' (available: ipm)");
  if (spec.input.empty() == spec.gen.empty()) throw Failure("exactly one of --input and --gen is required");
  if (spec.instances > 1 && spec.gen.empty()) throw Failure("--instances needs --gen");

  const int k = spec.instances;
  std::vector<std::string> texts(k), errors(k);
  auto work = [&](int i) {
    std::ostringstream os;
    try {
      emit(os, spec, spec.seed + i, run_one(spec, spec.seed + i));
      texts[i] = os.str();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  const int jobs = std::max(1, std::min(spec.jobs, k));
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < k; i += jobs) work(i);
    });
  for (auto& th : pool) th.join();

  for (int i = 0; i < k; ++i)
    if (!errors[i].empty()) throw Failure(errors[i]);

  std::ofstream file;
  if (!spec.out.empty()) {
    file.open(spec.out);
    if (!file) throw Failure("cannot write '" + spec.out + "'");
  }
  std::ostream& out = spec.out.empty() ? std::cout : file;
  for (int i = 0; i < k; ++i) out << texts[i];
  out.flush();
  if (!out) throw Failure("write failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Column generation bounds over dd/sdd inner approximations of the psd cone"};
  app.require_subcommand(1);
  RunSpec spec;

  auto add_common = [&spec](CLI::App* sub) {
    auto* in = sub->add_option("--input", spec.input, "Input file");
    auto* gen = sub->add_option("--gen", spec.gen, "Generator spec");
    in->excludes(gen);
    sub->add_option("--mode", spec.mode, "lp or socp")->check(CLI::IsMember({"lp", "socp"}));
    sub->add_option("--cuts", spec.cuts, "Atoms per eigenvector pricing round")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", spec.max_iters, "Iteration budget")->check(CLI::NonNegativeNumber);
    sub->add_option("--time-limit", spec.time_limit, "Seconds")->check(CLI::PositiveNumber);
    sub->add_option("--seed", spec.seed, "Generator seed");
    sub->add_option("--out", spec.out, "Output CSV path (default stdout)");
    sub->add_option("--jobs", spec.jobs, "Threads for independent instances")->check(CLI::PositiveNumber);
    sub->add_option("--instances", spec.instances, "Generated instances, seeds seed..seed+k-1")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--deterministic", spec.deterministic, "Write elapsed_ms as 0");
  };
  auto add_pricing = [&spec](CLI::App* sub) {
    sub->add_option("--pricing", spec.pricing, "eig or triples")->check(CLI::IsMember({"eig", "triples"}));
    sub->add_option("--t1", spec.t1, "Violated triples collected per round")->check(CLI::PositiveNumber);
    sub->add_option("--t2", spec.t2, "Triples added per round")->check(CLI::PositiveNumber);
  };

  auto* polymin = app.add_subcommand("polymin", "Lower bound on a form over the unit sphere");
  add_common(polymin);
  add_pricing(polymin);
  polymin->add_flag("--amgm", spec.amgm, "Add am-gm columns");
  auto* stableset = app.add_subcommand("stableset", "Upper bound on the stability number");
  add_common(stableset);
  add_pricing(stableset);
  auto* sdp = app.add_subcommand("sdp", "Inner approximation of max bᵀy s.t. C − Σ yᵢAᵢ ⪰ 0");
  add_common(sdp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  spec.command = app.get_subcommands().front()->get_name();
  try {
    return execute(spec);
  } catch (const std::exception& e) {
    std::cerr << "conecg: error: " << e.what() << '\n';
    return 1;
  }
}
