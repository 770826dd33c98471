// Command-line front end: symmetry reports, simulations, spectra, lattices.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swarmsym/configuration.hpp"
#include "swarmsym/connectivity.hpp"
#include "swarmsym/errors.hpp"
#include "swarmsym/lattice.hpp"
#include "swarmsym/protocols.hpp"
#include "swarmsym/spectral.hpp"
#include "swarmsym/structure.hpp"
#include "swarmsym/symmetry.hpp"

namespace fs = std::filesystem;
using namespace swarmsym;

namespace {

enum ExitCode { kOk = 0, kInput = 2, kProtocol = 3, kInvariant = 4, kCap = 5 };

struct Globals {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

nlohmann::json group_json(const SymmetryGroup& g) {
  nlohmann::json elements = nlohmann::json::array();
  if (!g.is_full_gamma()) {
    for (const auto& e : g.elements()) elements.push_back(to_string(e));
  }
  nlohmann::json doc{{"full_gamma", g.is_full_gamma()}, {"elements", elements}};
  doc["order"] = g.is_full_gamma() ? nlohmann::json("inf") : nlohmann::json(g.order());
  return doc;
}

int cmd_symmetries(const Globals& globals, const std::string& path, bool chirality_only) {
  const Configuration z = read_configuration(path);
  const SymmetryGroup g = detect_symmetries(z, globals.tol, chirality_only);
  nlohmann::json doc = group_json(g);
  doc["n"] = z.size();
  doc["symmetricity"] = g.rotation_count();
  doc["chirality_only"] = chirality_only;
  doc["structure"] = nlohmann::json::parse(structure_to_json(classify_structure(z, globals.tol)));
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

int cmd_classify(const Globals& globals, const std::string& path) {
  const Configuration z = read_configuration(path);
  std::cout << nlohmann::json::parse(structure_to_json(classify_structure(z, globals.tol))).dump(2) << '\n';
  return kOk;
}

struct SimulateArgs {
  std::string input;
  std::string protocol = "gtm";
  double h = 0.25;
  double range = 1.0;
  int rounds = 1;
  bool cycle = false;
  bool no_monitor = false;
  double singular_tol = kSingularTol;
  std::string trace = "trace.csv";
  std::string log = "symmetry.log";
};

int cmd_simulate(const Globals& globals, const SimulateArgs& args) {
  const Configuration z0 = read_configuration(args.input);
  Protocol p;
  if (args.protocol == "gtm") {
    p = gtm_protocol(args.range, args.h);
  } else if (args.protocol == "uniform-average") {
    p = uniform_average_protocol(args.range, args.h);
  } else if (args.protocol == "stationary") {
    p = stationary_protocol(args.range);
  } else {
    throw InputError("unknown protocol '" + args.protocol + "' (gtm, uniform-average, stationary)");
  }
  RunOptions options;
  options.monitor = {!args.no_monitor, false, !args.no_monitor};
  options.tol = globals.tol;
  options.singular_tol = args.singular_tol;
  if (args.cycle) options.fixed_graph = cycle_graph(z0.size());
  const Trace trace = run(p, z0, args.rounds, options);

  const fs::path dir(globals.output_dir);
  write_file(dir / args.trace, trace_to_csv(trace));
  const std::string log = symmetry_log(trace);
  write_file(dir / args.log, log);
  std::cout << log;
  return kOk;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
  }
  return out;
}

int cmd_spectrum(const Globals& globals, int n, const std::string& generator, const std::string& h_list) {
  std::vector<double> w;
  if (generator == "gtm") {
    w = gtm_generator(n);
  } else {
    w = parse_list(generator);
    if (n > 0 && static_cast<int>(w.size()) != n) throw InputError("generator length differs from --n");
  }
  const std::vector<double> hs = parse_list(h_list);
  if (hs.empty()) throw InputError("--h needs at least one step size");
  const std::vector<double> lambdas = circulant_eigs(w);

  nlohmann::json reports = nlohmann::json::array();
  for (double h : hs) reports.push_back(nlohmann::json::parse(report_to_json(analyze_circulant(w, h))));
  nlohmann::json doc{{"n", w.size()}, {"generator", w}, {"reports", reports}};

  const fs::path dir(globals.output_dir);
  write_file(dir / "spectrum.json", doc.dump(2) + "\n");
  write_file(dir / "spectrum.svg", spectrum_svg(lambdas, hs));
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

int cmd_lattice(const Globals& globals, const std::string& path, int max_rot_order, bool conjugacy,
                int max_depth, std::size_t node_cap) {
  const Configuration z = read_configuration(path);
  LatticeOptions options;
  options.max_rot_order = max_rot_order;
  options.dedup_conjugacy = conjugacy;
  options.max_depth = max_depth;
  options.node_cap = node_cap;
  options.tol = globals.tol;
  options.allow_partial = true;
  if (globals.seed != 0) options.seed = globals.seed;
  const IsotropyLattice lattice = upward_lattice(z, options);

  const fs::path dir(globals.output_dir);
  write_file(dir / "lattice.dot", lattice_to_dot(lattice));
  write_file(dir / "lattice.json", lattice_to_json(lattice) + "\n");
  std::cout << "nodes " << lattice.nodes.size() << "\nedges " << lattice.edges.size() << "\n";
  if (lattice.truncated) {
    std::cerr << "error: node cap " << node_cap << " reached; output is partial\n";
    return kCap;
  }
  return kOk;
}

int cmd_automorphisms(const std::string& path, double range, bool rotational) {
  const Configuration z = read_configuration(path);
  const ConnectivityGraph g = build_graph(z, range);
  nlohmann::json doc;
  doc["n"] = g.size();
  doc["edges"] = to_edge_list(g);
  auto perm_text = [](const Permutation& p) {
    std::string s = "[";
    for (int i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p(i) + 1);
    return s + "]";
  };
  if (rotational) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& p : rotational_automorphisms(g)) list.push_back(perm_text(p));
    doc["rotational"] = list;
  }
  const AutomorphismGroup aut = automorphisms(g);
  doc["order"] = aut.elements.size();
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& p : aut.generators) gens.push_back(perm_text(p));
  doc["generators"] = gens;
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry analysis and simulation of planar robot swarms"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--tol", globals.tol, "relative geometric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", globals.seed, "random seed for lattice witnesses");
  app.add_option("--output-dir", globals.output_dir, "directory for emitted files");

  std::string input;
  bool chirality_only = false;
  auto* sym = app.add_subcommand("symmetries", "isotropy group and structure of a configuration");
  sym->add_option("config", input, "configuration JSON")->required();
  sym->add_flag("--chirality-only", chirality_only, "rotations only");

  auto* cls = app.add_subcommand("classify", "structure report of a configuration");
  cls->add_option("config", input, "configuration JSON")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a protocol and log symmetry per round");
  simulate->add_option("config", sim.input, "initial configuration JSON")->required();
  simulate->add_option("--protocol", sim.protocol, "gtm | uniform-average | stationary");
  simulate->add_option("--h", sim.h, "step size in [0, 1]");
  simulate->add_option("--range", sim.range, "viewing range C")->check(CLI::PositiveNumber);
  simulate->add_option("--rounds", sim.rounds, "number of rounds")->check(CLI::NonNegativeNumber);
  simulate->add_flag("--cycle", sim.cycle, "reduced evolution on the label cycle graph");
  simulate->add_flag("--no-monitor", sim.no_monitor, "skip per-round symmetry checks");
  simulate->add_option("--singular-tol", sim.singular_tol, "|sigma| threshold for a singular reduced map");
  simulate->add_option("--trace", sim.trace, "trace CSV file name");
  simulate->add_option("--log", sim.log, "symmetry log file name");

  int n = 0;
  std::string generator = "gtm";
  std::string h_list = "0.5";
  auto* spectrum = app.add_subcommand("spectrum", "circulant spectrum, critical step sizes, SVG plot");
  spectrum->add_option("--n", n, "robot count (required for --generator gtm)");
  spectrum->add_option("--generator", generator, "gtm or comma-separated first row");
  spectrum->add_option("--h", h_list, "comma-separated step sizes");

  int max_rot_order = 0;
  bool conjugacy = false;
  int max_depth = -1;
  std::size_t node_cap = 20000;
  auto* lattice = app.add_subcommand("lattice", "upward isotropy lattice as DOT and JSON");
  lattice->add_option("config", input, "configuration JSON")->required();
  lattice->add_option("--max-rot-order", max_rot_order, "candidate rotation order m (default 2n)");
  lattice->add_flag("--conjugacy", conjugacy, "merge nodes that are conjugate");
  lattice->add_option("--max-depth", max_depth, "expansion depth cap (-1 unbounded)");
  lattice->add_option("--node-cap", node_cap, "maximum explored subspaces");

  double range = 1.0;
  bool rotational = false;
  auto* autos = app.add_subcommand("automorphisms", "automorphisms of the visibility graph");
  autos->add_option("config", input, "configuration JSON")->required();
  autos->add_option("--range", range, "viewing range C")->check(CLI::PositiveNumber);
  autos->add_flag("--rotational", rotational, "also list label-shift automorphisms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*sym) return cmd_symmetries(globals, input, chirality_only);
    if (*cls) return cmd_classify(globals, input);
    if (*simulate) return cmd_simulate(globals, sim);
    if (*spectrum) {
      if (generator == "gtm" && n < 3) throw InputError("--n >= 3 is required for the gtm generator");
      return cmd_spectrum(globals, n, generator, h_list);
    }
    if (*lattice) return cmd_lattice(globals, input, max_rot_order, conjugacy, max_depth, node_cap);
    if (*autos) return cmd_automorphisms(input, range, rotational);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const ProtocolError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kProtocol;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kOk;
}
