// Command-line front end. Exit codes: 0 success, 1 runtime failure,
// 2 usage or parameter error, 3 malformed file.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgrid/allocation.hpp"
#include "dgrid/analysis.hpp"
#include "dgrid/erasure.hpp"
#include "dgrid/error.hpp"
#include "dgrid/fragmentation.hpp"
#include "dgrid/scenario.hpp"
#include "dgrid/shamir.hpp"
#include "dgrid/share_format.hpp"
#include "dgrid/topology.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace dgrid;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;

class IoError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Bytes read_bytes(const fs::path& p) {
  const auto s = read_text(p);
  return Bytes(s.begin(), s.end());
}

void write_file(const fs::path& p, ByteView data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("cannot write '" + p.string() + "'");
}

void write_file(const fs::path& p, std::string_view text) {
  write_file(p, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Seed source shared by commands that draw randomness.
struct Randomness {
  std::optional<std::uint64_t> seed;
  bool entropy = false;

  void attach(CLI::App* cmd) {
    auto* s = cmd->add_option("--seed", seed, "Seed for the deterministic random stream");
    auto* e = cmd->add_flag("--entropy", entropy, "Draw randomness from the operating system instead");
    s->excludes(e);
  }

  ChaChaStream stream(std::string_view what) const {
    if (seed) return ChaChaStream(*seed);
    if (entropy) return ChaChaStream::from_entropy();
    throw UsageError(std::string(what) + " needs --seed or --entropy");
  }
};

struct FamilyOutput {
  std::string input;
  fs::path out_dir = ".";
  std::string name;
  bool json = false;
};

void add_family_output(CLI::App* cmd, FamilyOutput& o) {
  cmd->add_option("input", o.input, "File to partition")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", o.out_dir, "Directory for share files and manifest");
  cmd->add_option("--name", o.name, "Base name for outputs (default: input file name)");
  cmd->add_flag("--json", o.json, "Machine-readable output");
}

int emit_family(const FamilyOutput& o, const std::vector<Share>& shares) {
  fs::create_directories(o.out_dir);
  const std::string base = o.name.empty() ? fs::path(o.input).filename().string() : o.name;
  Manifest m{shares.front().object_id, shares.front().scheme, shares.front().params, {}};
  json files = json::array();
  for (const auto& s : shares) {
    const std::string file = base + "." + std::to_string(s.index) + ".dgsh";
    write_file(o.out_dir / file, write_share(s));
    m.share_files.push_back(file);
    files.push_back((o.out_dir / file).string());
  }
  const fs::path manifest = o.out_dir / (base + ".manifest");
  write_file(manifest, render_manifest(m));
  if (o.json) {
    std::cout << json{{"object", to_hex(m.object_id)},
                      {"scheme", scheme_name(m.scheme)},
                      {"k", m.params.k},
                      {"n", m.params.n},
                      {"manifest", manifest.string()},
                      {"shares", files}}
                     .dump()
              << "\n";
  } else {
    std::cout << "object " << to_hex(m.object_id) << "\nmanifest " << manifest.string() << "\n";
    for (const auto& f : files) std::cout << "share " << f.get<std::string>() << "\n";
  }
  return 0;
}

struct FamilyInput {
  std::vector<std::string> shares;
  std::string manifest;
  fs::path output;
  bool json = false;
};

void add_family_input(CLI::App* cmd, FamilyInput& in) {
  cmd->add_option("shares", in.shares, "Share files")->check(CLI::ExistingFile);
  cmd->add_option("--manifest", in.manifest, "Manifest listing the share files")->check(CLI::ExistingFile);
  cmd->add_option("-o,--output", in.output, "Where to write the reconstructed file")->required();
  cmd->add_flag("--json", in.json, "Machine-readable output");
}

/// Loads the named shares, or every share of the manifest that exists.
std::vector<Share> load_family(const FamilyInput& in) {
  if (in.shares.empty() == in.manifest.empty()) throw UsageError("give share files or --manifest, not both");
  std::vector<Share> shares;
  if (!in.manifest.empty()) {
    const Manifest m = parse_manifest(read_text(in.manifest));
    const fs::path dir = fs::path(in.manifest).parent_path();
    for (const auto& f : m.share_files) {
      if (!fs::exists(dir / f)) continue;  // lost shares are expected
      shares.push_back(read_share(read_bytes(dir / f)));
      if (shares.back().object_id != m.object_id || shares.back().scheme != m.scheme)
        throw InconsistencyError("share '" + f + "' does not belong to the manifest's family");
    }
  } else {
    for (const auto& f : in.shares) shares.push_back(read_share(read_bytes(f)));
  }
  if (shares.empty()) throw InsufficientSharesError("no share files found");
  return shares;
}

int emit_rebuilt(const FamilyInput& in, const Bytes& data, std::size_t used) {
  write_file(in.output, data);
  if (in.json)
    std::cout << json{{"object", to_hex(object_id_of(data))},
                      {"bytes", data.size()},
                      {"shares", used},
                      {"output", in.output.string()}}
                     .dump()
              << "\n";
  else
    std::cout << "object " << to_hex(object_id_of(data)) << "\nbytes " << data.size() << "\noutput "
              << in.output.string() << "\n";
  return 0;
}

std::vector<ByteRange> parse_ranges(const std::string& text) {
  std::vector<ByteRange> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto colon = item.find(':');
    ByteRange r;
    if (colon == std::string_view::npos ||
        std::from_chars(item.data(), item.data() + colon, r.begin).ec != std::errc{} ||
        std::from_chars(item.data() + colon + 1, item.data() + item.size(), r.end).ec != std::errc{})
      throw UsageError("ranges look like 0:4,4:10");
    out.push_back(r);
  }
  return out;
}

std::uint64_t share_bytes(Scheme scheme, std::uint64_t size, ShareParams p) {
  switch (scheme) {
    case Scheme::shamir: return size;
    case Scheme::fragment: return stripe_length(size, p.n);
    default: return stripe_length(size, p.k);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Partition, place and analyse data shares on a clustered grid"};
  app.require_subcommand(1);

  // split / combine
  auto* split_cmd = app.add_subcommand("split", "Shamir-split a file into n shares, any k of which recover it");
  ShareParams split_params;
  Randomness split_rng;
  FamilyOutput split_out;
  split_cmd->add_option("--k", split_params.k, "Threshold")->required();
  split_cmd->add_option("--n", split_params.n, "Number of shares")->required();
  split_rng.attach(split_cmd);
  add_family_output(split_cmd, split_out);

  auto* combine_cmd = app.add_subcommand("combine", "Recover a file from k Shamir shares");
  FamilyInput combine_in;
  add_family_input(combine_cmd, combine_in);

  // encode / decode
  auto* encode_cmd = app.add_subcommand("encode", "Erasure-code a file into n shares, any k of which recover it");
  ShareParams encode_params;
  Randomness encode_rng;
  FamilyOutput encode_out;
  bool sealed = false;
  encode_cmd->add_option("--k", encode_params.k, "Data stripes")->required();
  encode_cmd->add_option("--n", encode_params.n, "Total shares")->required();
  encode_cmd->add_flag("--sealed", sealed, "Encrypt first and secret-share the key across the shares");
  encode_rng.attach(encode_cmd);
  add_family_output(encode_cmd, encode_out);

  auto* decode_cmd = app.add_subcommand("decode", "Recover a file from k coded shares (plain or sealed)");
  FamilyInput decode_in;
  add_family_input(decode_cmd, decode_in);

  // fragment / reassemble
  auto* fragment_cmd = app.add_subcommand("fragment", "Cut a file into byte-range fragments");
  std::string ranges;
  int parts = 0;
  FamilyOutput fragment_out;
  auto* ranges_opt = fragment_cmd->add_option("--ranges", ranges, "Half-open ranges, e.g. 0:4,4:10");
  auto* parts_opt = fragment_cmd->add_option("--parts", parts, "Number of near-equal fragments");
  ranges_opt->excludes(parts_opt);
  add_family_output(fragment_cmd, fragment_out);

  auto* reassemble_cmd = app.add_subcommand("reassemble", "Join every fragment back into the file");
  FamilyInput reassemble_in;
  add_family_input(reassemble_cmd, reassemble_in);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Place share replicas on a topology at minimum cost");
  std::string plan_topo, plan_object, plan_scheme = "rs_systematic";
  std::uint64_t plan_size = 0;
  ShareParams plan_params;
  std::size_t budget = 0;
  CostModel model;
  int limit = 1;
  bool plan_exact = false, plan_json = false;
  fs::path plan_output;
  plan_cmd->add_option("topology", plan_topo, "Topology file")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--object", plan_object, "Object name used in demand lines")->required();
  plan_cmd->add_option("--size", plan_size, "Object size in bytes")->required();
  plan_cmd->add_option("--scheme", plan_scheme, "Partitioning scheme, sets the share size")
      ->check(CLI::IsMember({"shamir", "rs_systematic", "rs_sealed", "fragment"}));
  plan_cmd->add_option("--k", plan_params.k, "Threshold")->required();
  plan_cmd->add_option("--n", plan_params.n, "Number of distinct shares")->required();
  plan_cmd->add_option("--budget", budget, "Maximum total replicas")->required();
  plan_cmd->add_option("--alpha", model.alpha, "Storage cost per byte (default 0)");
  plan_cmd->add_option("--limit", limit, "Maximum distinct shares per node (default 1)");
  plan_cmd->add_flag("--exact", plan_exact, "Exhaustive search (small instances only)");
  plan_cmd->add_option("-o,--output", plan_output, "Also write the plan document here");
  plan_cmd->add_flag("--json", plan_json, "Machine-readable output");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run a scenario script against a simulated grid");
  std::string sim_topo, sim_script;
  std::optional<std::uint64_t> sim_seed;
  bool sim_json = false;
  sim_cmd->add_option("topology", sim_topo, "Topology file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("script", sim_script, "Scenario script")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--seed", sim_seed, "Seed for routing and share randomness");
  sim_cmd->add_flag("--json", sim_json, "Machine-readable output");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Breach probability and availability of a plan");
  std::string an_topo, an_plan;
  std::optional<int> an_k;
  bool an_exact = false, an_json = false;
  std::optional<std::uint64_t> trials, an_seed;
  analyze_cmd->add_option("topology", an_topo, "Topology file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("plan", an_plan, "Plan document")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--k", an_k, "Threshold (default: the plan's k)");
  auto* exact_flag = analyze_cmd->add_flag("--exact", an_exact, "Enumerate every node subset (up to 20 nodes)");
  auto* trials_opt = analyze_cmd->add_option("--trials", trials, "Monte Carlo trials");
  analyze_cmd->add_option("--seed", an_seed, "Monte Carlo seed");
  exact_flag->excludes(trials_opt);
  analyze_cmd->add_flag("--json", an_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (split_cmd->parsed()) {
    auto rng = split_rng.stream("split");
    const Bytes data = read_bytes(split_out.input);
    return emit_family(split_out, split(data, split_params, rng));
  }
  if (combine_cmd->parsed()) {
    const auto shares = load_family(combine_in);
    return emit_rebuilt(combine_in, reconstruct(shares), shares.size());
  }
  if (encode_cmd->parsed()) {
    const Bytes data = read_bytes(encode_out.input);
    if (!sealed) return emit_family(encode_out, encode(data, encode_params));
    auto rng = encode_rng.stream("encode --sealed");
    return emit_family(encode_out, sealed_encode(data, encode_params, rng));
  }
  if (decode_cmd->parsed()) {
    const auto shares = load_family(decode_in);
    const bool is_sealed = shares.front().scheme == Scheme::rs_sealed;
    return emit_rebuilt(decode_in, is_sealed ? sealed_decode(shares) : decode(shares), shares.size());
  }
  if (fragment_cmd->parsed()) {
    const Bytes data = read_bytes(fragment_out.input);
    FragmentationScheme scheme;
    if (!ranges.empty())
      scheme = {data.size(), parse_ranges(ranges)};
    else if (parts > 0)
      scheme = even_scheme(data.size(), parts);
    else
      throw UsageError("fragment needs --ranges or --parts");
    return emit_family(fragment_out, fragment(data, scheme));
  }
  if (reassemble_cmd->parsed()) {
    const auto shares = load_family(reassemble_in);
    return emit_rebuilt(reassemble_in, reassemble(shares), shares.size());
  }

  if (plan_cmd->parsed()) {
    const auto topo = parse_topology(read_text(plan_topo));
    plan_params.validate();
    if (plan_size == 0) throw ParameterError("--size must be positive");
    model.share_size = static_cast<double>(share_bytes(*scheme_from_name(plan_scheme), plan_size, plan_params));
    const AllocationPlan plan = plan_exact ? optimal_allocate(topo, plan_object, plan_params, model, budget, limit)
                                           : allocate(topo, plan_object, plan_params, model, budget, limit);
    const auto cost = plan_cost(topo, plan, model);
    const auto scenario = scenario_name(classify_scenario(topo, plan));
    const std::string doc = render_plan(plan);
    if (!plan_output.empty()) write_file(plan_output, doc);
    if (plan_json) {
      json placements = json::object();
      for (const auto& [s, nodes] : plan.placements) placements[std::to_string(s)] = nodes;
      std::cout << json{{"object", plan.object},
                        {"k", plan.params.k},
                        {"n", plan.params.n},
                        {"method", plan_exact ? "exact" : "greedy"},
                        {"placements", placements},
                        {"replicas", plan.replica_count()},
                        {"share_bytes", model.share_size},
                        {"cost", {{"access", cost.access}, {"storage", cost.storage}, {"total", cost.total}}},
                        {"scenario", scenario}}
                       .dump()
                << "\n";
    } else {
      // Cost lines are comments, so stdout is itself a valid plan document.
      std::cout << doc << "# method " << (plan_exact ? "exact" : "greedy") << "\n# cost access=" << fmt(cost.access)
                << " storage=" << fmt(cost.storage) << " total=" << fmt(cost.total) << "\n# scenario " << scenario
                << "\n";
    }
    return 0;
  }

  if (sim_cmd->parsed()) {
    if (!sim_seed) throw UsageError("simulate needs --seed");
    const auto topo = parse_topology(read_text(sim_topo));
    const auto outcome =
        run_scenario(topo, read_text(sim_script), *sim_seed, fs::path(sim_script).parent_path());
    if (sim_json) {
      json events = json::array();
      for (const auto& e : outcome.events) {
        json ev{{"command", e.command}, {"line", e.line}};
        for (const auto& f : e.fields) {
          if (f.numeric)
            ev[f.key] = std::stoull(f.value);
          else
            ev[f.key] = f.value;
        }
        events.push_back(ev);
      }
      json links = json::array();
      for (const auto& [l, count] : outcome.metrics.per_link_traffic)
        links.push_back({{"a", l.first}, {"b", l.second}, {"traffic", count}});
      json storage = json::object();
      for (const auto& [node, bytes] : outcome.metrics.storage_bytes_per_node)
        storage[node] = {{"payload_bytes", bytes}, {"header_bytes", outcome.metrics.header_bytes_per_node.at(node)}};
      std::cout << json{{"events", events},
                        {"metrics",
                         {{"total_hops", outcome.metrics.total_hops},
                          {"node_contacts", outcome.metrics.node_contacts},
                          {"links", links},
                          {"storage", storage}}},
                        {"assertions",
                         {{"passed", outcome.assertions_passed}, {"failed", outcome.assertions_failed}}}}
                       .dump()
                << "\n";
    } else {
      std::cout << render_outcome(outcome);
    }
    return outcome.assertions_failed == 0 ? 0 : kExitRuntime;
  }

  if (analyze_cmd->parsed()) {
    const auto topo = parse_topology(read_text(an_topo));
    const auto plan = parse_plan(read_text(an_plan));
    for (const auto& [s, nodes] : plan.placements)
      for (const auto& node : nodes)
        if (!topo.find_node(node)) throw ReferenceError("plan node '" + node + "' is not in the topology");
    const auto threat = ThreatModel::from_topology(topo, an_k.value_or(plan.params.k));
    AnalysisReport report;
    if (trials) {
      if (!an_seed) throw UsageError("--trials needs --seed");
      report = monte_carlo(plan, threat, *trials, *an_seed);
    } else {
      try {
        report = analyze_exact(plan, threat);
      } catch (const TooLargeError& e) {
        throw TooLargeError(std::string(e.what()) + "; use --trials T --seed S");
      }
    }
    std::optional<double> access;
    try {
      access = plan_cost(topo, plan, {}).access;
    } catch (const InfeasibleError&) {
      // Some demanding cluster cannot reach k shares; report no access cost.
    }
    if (an_json) {
      json j{{"method", method_name(report.method)},
             {"breach_prob", report.breach_prob},
             {"availability", report.availability},
             {"access_cost", access ? json(*access) : json(nullptr)},
             {"replicas", plan.replica_count()}};
      if (report.method == Method::monte_carlo) {
        j["trials"] = report.trials;
        j["breach_stderr"] = *report.breach_stderr;
        j["availability_stderr"] = *report.availability_stderr;
      }
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "method " << method_name(report.method) << "\nbreach_prob " << fmt(report.breach_prob)
                << "\navailability " << fmt(report.availability) << "\naccess_cost "
                << (access ? fmt(*access) : std::string("unreachable")) << "\nreplicas " << plan.replica_count()
                << "\n";
      if (report.method == Method::monte_carlo)
        std::cout << "trials " << report.trials << "\nbreach_stderr " << fmt(*report.breach_stderr)
                  << "\navailability_stderr " << fmt(*report.availability_stderr) << "\n";
    }
    return 0;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const RuntimeFailure& e) {
    std::cerr << "dgrid: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const UsageError& e) {
    std::cerr << "dgrid: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatFailure& e) {
    std::cerr << "dgrid: " << e.what() << "\n";
    return kExitFormat;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "dgrid: " << e.what() << "\n";
    return kExitRuntime;
  }
}
