#include "dgrid/scenario.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <optional>

#include "dgrid/error.hpp"
#include "text.hpp"

namespace dgrid {
namespace {

constexpr std::string_view kOwner = "owner";

std::string read_file(const std::filesystem::path& path, std::size_t line) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(line, "cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Options {
  std::map<std::string, std::string, std::less<>> values;

  std::optional<std::string_view> get(std::string_view key) const {
    if (auto it = values.find(key); it != values.end()) return it->second;
    return std::nullopt;
  }
};

Options parse_options(const text::Line& l, std::size_t first) {
  Options o;
  for (std::size_t i = first; i < l.words.size(); ++i) {
    const auto w = l.words[i];
    const auto eq = w.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ParseError(l.number, "expected key=value, got '" + std::string(w) + "'");
    if (!o.values.emplace(std::string(w.substr(0, eq)), std::string(w.substr(eq + 1))).second)
      throw ParseError(l.number, "option '" + std::string(w.substr(0, eq)) + "' given twice");
  }
  return o;
}

std::uint64_t option_u64(const Options& o, std::string_view key, std::size_t line) {
  const auto v = o.get(key);
  if (!v) throw ParseError(line, "missing option '" + std::string(key) + "'");
  if (auto n = text::to_u64(*v)) return *n;
  throw ParseError(line, "option '" + std::string(key) + "' is not a non-negative integer");
}

// "1:a,b;2:c" -> placements
std::map<int, std::set<std::string>> parse_place(std::string_view spec, std::size_t line) {
  std::map<int, std::set<std::string>> out;
  while (!spec.empty()) {
    const auto semi = spec.find(';');
    const auto item = spec.substr(0, semi);
    spec = semi == std::string_view::npos ? std::string_view{} : spec.substr(semi + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError(line, "place entries look like <index>:<node>[,<node>]");
    const auto index = text::to_u64(item.substr(0, colon));
    if (!index || *index < 1 || *index > 255) throw ParseError(line, "bad share index in place=");
    auto nodes = item.substr(colon + 1);
    auto& set = out[static_cast<int>(*index)];
    while (!nodes.empty()) {
      const auto comma = nodes.find(',');
      const auto node = nodes.substr(0, comma);
      nodes = comma == std::string_view::npos ? std::string_view{} : nodes.substr(comma + 1);
      if (node.empty()) throw ParseError(line, "empty node id in place=");
      set.emplace(node);
    }
  }
  return out;
}

ScenarioEvent::Field num(std::string key, std::uint64_t v) { return {std::move(key), std::to_string(v), true}; }
ScenarioEvent::Field str(std::string key, std::string v) { return {std::move(key), std::move(v), false}; }

class Runner {
 public:
  Runner(const GridTopology& topo, std::uint64_t seed, std::filesystem::path base)
      : world_(topo, seed), seed_(seed), base_(std::move(base)) {
    tokens_[std::string(kOwner)].principal = kOwner;
  }

  ScenarioOutcome run(std::string_view script) {
    for (const auto& l : text::tokenize(script)) dispatch(l);
    out_.metrics = world_.metrics();
    return std::move(out_);
  }

 private:
  struct LastGet {
    std::string status;
    std::uint64_t hops = 0;
  };

  void dispatch(const text::Line& l) {
    const auto cmd = l.words[0];
    if (cmd == "put") return put(l);
    if (cmd == "get") return get(l);
    if (cmd == "grant") return grant(l);
    if (cmd == "fail" || cmd == "restore") return membership(l, cmd == "fail");
    if (cmd == "metrics") return metrics(l);
    if (cmd.starts_with("assert-")) return check(l);
    throw ParseError(l.number, "unknown command '" + std::string(cmd) + "'");
  }

  ScenarioEvent& emit(const text::Line& l) {
    auto& e = out_.events.emplace_back();
    e.command = std::string(l.words[0]);
    e.line = l.number;
    return e;
  }

  const ObjectId& object(const text::Line& l, std::string_view name) const {
    auto it = names_.find(std::string(name));
    if (it == names_.end()) throw ParseError(l.number, "unknown object '" + std::string(name) + "'");
    return it->second;
  }

  void put(const text::Line& l) {
    text::need_arity(l, 3, l.words.size());
    const std::string name(l.words[1]);
    if (names_.contains(name)) throw ParseError(l.number, "object '" + name + "' already put");
    const auto opts = parse_options(l, 2);
    for (const auto& [key, value] : opts.values)
      if (key != "scheme" && key != "size" && key != "file" && key != "plan" && key != "place" && key != "k" &&
          key != "n" && key != "from" && key != "seed")
        throw ParseError(l.number, "unknown put option '" + key + "'");

    const auto scheme_text = opts.get("scheme");
    if (!scheme_text) throw ParseError(l.number, "put needs scheme=");
    const auto scheme = scheme_from_name(*scheme_text);
    if (!scheme) throw ParseError(l.number, "unknown scheme '" + std::string(*scheme_text) + "'");
    const std::uint64_t put_seed = opts.get("seed") ? option_u64(opts, "seed", l.number) : seed_ + l.number;

    Bytes data;
    if (opts.get("size") && opts.get("file")) throw ParseError(l.number, "give size= or file=, not both");
    if (opts.get("size")) {
      data.resize(option_u64(opts, "size", l.number));
      ChaChaStream(put_seed, 1).fill(data);
    } else if (const auto file = opts.get("file")) {
      const auto content = read_file(base_ / std::string(*file), l.number);
      data.assign(content.begin(), content.end());
    } else {
      throw ParseError(l.number, "put needs size= or file=");
    }
    if (data.empty()) throw ParseError(l.number, "object must not be empty");

    AllocationPlan plan;
    if (const auto plan_file = opts.get("plan")) {
      if (opts.get("place")) throw ParseError(l.number, "give plan= or place=, not both");
      try {
        plan = parse_plan(read_file(base_ / std::string(*plan_file), l.number));
      } catch (const ParseError& e) {
        throw ParseError(l.number, std::string("in plan file: ") + e.what());
      }
    } else if (const auto place = opts.get("place")) {
      plan.object = name;
      plan.params = {static_cast<int>(option_u64(opts, "k", l.number)), static_cast<int>(option_u64(opts, "n", l.number))};
      plan.placements = parse_place(*place, l.number);
    } else {
      throw ParseError(l.number, "put needs plan= or place=");
    }
    if (plan.params.k < 1 || plan.params.k > plan.params.n || plan.params.n > 255)
      throw ParseError(l.number, "invalid (k, n)");

    auto& e = emit(l);
    e.fields.push_back(str("object", name));
    const auto before = world_.metrics().total_hops;
    try {
      std::optional<std::string_view> from;
      if (auto f = opts.get("from")) from = *f;
      const ObjectId id = world_.put_object(data, PartitionSpec{*scheme, plan.params}, plan, put_seed, from);
      names_[name] = id;
      tokens_[std::string(kOwner)].authorized_objects.insert(id);
      e.fields.push_back(str("status", "ok"));
      e.fields.push_back(str("id", to_hex(id)));
      e.fields.push_back(num("bytes", data.size()));
      e.fields.push_back(num("replicas", plan.replica_count()));
      e.fields.push_back(num("hops", world_.metrics().total_hops - before));
    } catch (const RuntimeFailure& err) {
      e.fields.push_back(str("status", "failed"));
      e.fields.push_back(str("reason", err.what()));
    } catch (const UsageError& err) {
      throw ParseError(l.number, err.what());
    }
  }

  void get(const text::Line& l) {
    text::need_arity(l, 3, 4);
    const std::string name(l.words[1]);
    const ObjectId& id = object(l, name);
    const auto opts = parse_options(l, 2);
    const auto cluster = opts.get("cluster");
    if (!cluster) throw ParseError(l.number, "get needs cluster=");
    if (!world_.topology().has_cluster(*cluster)) throw ParseError(l.number, "unknown cluster '" + std::string(*cluster) + "'");
    const std::string principal(opts.get("as").value_or(kOwner));
    const AccessToken& token = tokens_[principal];

    auto& e = emit(l);
    e.fields.push_back(str("object", name));
    e.fields.push_back(str("cluster", std::string(*cluster)));
    e.fields.push_back(str("principal", principal));
    last_ = LastGet{};
    try {
      const auto r = world_.retrieve(id, *cluster, {principal, token.authorized_objects});
      last_.status = "ok";
      last_.hops = r.hops;
      e.fields.push_back(str("status", "ok"));
      e.fields.push_back(num("hops", r.hops));
      e.fields.push_back(num("bytes", r.data.size()));
      e.fields.push_back(str("digest", to_hex(object_id_of(r.data))));
    } catch (const AuthorizationError&) {
      last_.status = "unauthorized";
    } catch (const UnavailableError&) {
      last_.status = "unavailable";
    } catch (const IntegrityError&) {
      last_.status = "integrity";
    } catch (const ReferenceError& err) {
      throw ParseError(l.number, err.what());
    }
    if (last_.status != "ok") e.fields.push_back(str("status", last_.status));
  }

  void grant(const text::Line& l) {
    text::need_arity(l, 3, l.words.size());
    auto& token = tokens_[std::string(l.words[1])];
    token.principal = std::string(l.words[1]);
    for (std::size_t i = 2; i < l.words.size(); ++i) token.authorized_objects.insert(object(l, l.words[i]));
    auto& e = emit(l);
    e.fields.push_back(str("principal", token.principal));
  }

  void membership(const text::Line& l, bool fail) {
    text::need_arity(l, 2, l.words.size());
    std::vector<std::string> nodes(l.words.begin() + 1, l.words.end());
    try {
      if (fail)
        world_.fail_nodes(nodes);
      else
        world_.restore_nodes(nodes);
    } catch (const ReferenceError& err) {
      throw ParseError(l.number, err.what());
    }
    auto& e = emit(l);
    std::string joined;
    for (const auto& n : nodes) joined += (joined.empty() ? "" : ",") + n;
    e.fields.push_back(str("nodes", joined));
  }

  void metrics(const text::Line& l) {
    text::need_arity(l, 1, 1);
    auto& e = emit(l);
    const auto& m = world_.metrics();
    e.fields.push_back(num("total_hops", m.total_hops));
    e.fields.push_back(num("node_contacts", m.node_contacts));
    std::uint64_t stored = 0;
    for (const auto& [node, bytes] : m.storage_bytes_per_node) stored += bytes;
    e.fields.push_back(num("storage_bytes", stored));
  }

  void check(const text::Line& l) {
    const auto cmd = l.words[0];
    bool pass = false;
    std::string detail;
    if (cmd == "assert-success" || cmd == "assert-unavailable" || cmd == "assert-unauthorized") {
      text::need_arity(l, 1, 1);
      const std::string want = cmd == "assert-success" ? "ok" : std::string(cmd.substr(7));
      pass = last_.status == want;
      detail = "last get status " + (last_.status.empty() ? std::string("none") : last_.status);
    } else if (cmd == "assert-hops") {
      text::need_arity(l, 2, 2);
      const auto want = text::need_u64(l, 1, "hops");
      pass = last_.status == "ok" && last_.hops == want;
      detail = "last get hops " + std::to_string(last_.hops);
    } else if (cmd == "assert-total-hops") {
      text::need_arity(l, 2, 2);
      const auto want = text::need_u64(l, 1, "hops");
      pass = world_.metrics().total_hops == want;
      detail = "total hops " + std::to_string(world_.metrics().total_hops);
    } else if (cmd == "assert-stored") {
      text::need_arity(l, 3, 3);
      const std::string node(l.words[1]);
      if (!world_.topology().find_node(node)) throw ParseError(l.number, "unknown node '" + node + "'");
      const auto want = text::need_u64(l, 2, "bytes");
      const auto& m = world_.metrics().storage_bytes_per_node;
      const auto it = m.find(node);
      const std::uint64_t have = it == m.end() ? 0 : it->second;
      pass = have == want;
      detail = "stored " + std::to_string(have);
    } else {
      throw ParseError(l.number, "unknown assertion '" + std::string(cmd) + "'");
    }
    auto& e = emit(l);
    e.fields.push_back(str("result", pass ? "pass" : "fail"));
    e.fields.push_back(str("detail", detail));
    ++(pass ? out_.assertions_passed : out_.assertions_failed);
  }

  SimWorld world_;
  std::uint64_t seed_;
  std::filesystem::path base_;
  std::map<std::string, ObjectId> names_;
  std::map<std::string, AccessToken> tokens_;
  LastGet last_;
  ScenarioOutcome out_;
};

}  // namespace

const std::string* ScenarioEvent::find(std::string_view key) const {
  for (const auto& f : fields)
    if (f.key == key) return &f.value;
  return nullptr;
}

ScenarioOutcome run_scenario(const GridTopology& topology, std::string_view script, std::uint64_t seed,
                             const std::filesystem::path& base_dir) {
  return Runner(topology, seed, base_dir).run(script);
}

std::string render_outcome(const ScenarioOutcome& outcome) {
  std::string out;
  for (const auto& e : outcome.events) {
    out += e.command + " line=" + std::to_string(e.line);
    for (const auto& f : e.fields) {
      std::string v = f.value;
      for (auto& c : v)
        if (c == ' ' || c == '\n') c = '_';
      out += " " + f.key + "=" + v;
    }
    out += "\n";
  }
  const auto& m = outcome.metrics;
  out += "metrics total_hops=" + std::to_string(m.total_hops) + " node_contacts=" + std::to_string(m.node_contacts) + "\n";
  for (const auto& [link, count] : m.per_link_traffic)
    out += "link " + link.first + " " + link.second + " traffic=" + std::to_string(count) + "\n";
  for (const auto& [node, bytes] : m.storage_bytes_per_node)
    out += "storage " + node + " payload_bytes=" + std::to_string(bytes) + " header_bytes=" +
           std::to_string(m.header_bytes_per_node.at(node)) + "\n";
  out += "assertions passed=" + std::to_string(outcome.assertions_passed) +
         " failed=" + std::to_string(outcome.assertions_failed) + "\n";
  return out;
}

}  // namespace dgrid
