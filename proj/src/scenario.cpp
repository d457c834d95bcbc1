// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "tsnpdc/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <variant>

namespace tsnpdc {

const char* to_string(ResidenceSelector selector) {
  switch (selector) {
    case ResidenceSelector::Med: return "med";
    case ResidenceSelector::Max: return "max";
    case ResidenceSelector::Pdc: return "pdc";
  }
  return "?";
}

ResidenceSelector parse_residence_selector(std::string_view text) {
  if (text == "med") return ResidenceSelector::Med;
  if (text == "max") return ResidenceSelector::Max;
  if (text == "pdc") return ResidenceSelector::Pdc;
  throw BadParams("residence selector must be med, max or pdc, not '" + std::string(text) + "'");
}

namespace {

// ---------------------------------------------------------------------------
// A small TOML subset: [table], [[array of tables]], key = value, strings,
// integers, floats, booleans, arrays (may span lines) and inline tables.

struct Value;
using Array = std::vector<Value>;
using Table = std::vector<std::pair<std::string, Value>>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, std::shared_ptr<Array>, std::shared_ptr<Table>> v;
  int line = 0, col = 0;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_table() const { return std::holds_alternative<std::shared_ptr<Table>>(v); }
  bool is_array() const { return std::holds_alternative<std::shared_ptr<Array>>(v); }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Table document() {
    Table root;
    Table* current = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const int l = line_, c = col_;
        const bool array = text_.substr(pos_, 2) == "[[";
        advance(array ? 2 : 1);
        skip_ws();
        std::string name = key();
        skip_ws();
        expect(array ? "]]" : "]");
        end_of_line();
        current = open_table(root, name, array, l, c);
        continue;
      }
      const int l = line_, c = col_;
      std::string k = key();
      skip_ws();
      expect("=");
      skip_ws();
      Value val = value();
      end_of_line();
      for (const auto& [existing, _] : *current)
        if (existing == k) throw ParseError("duplicate key '" + k + "'", l, c);
      current->emplace_back(std::move(k), std::move(val));
    }
    return root;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && !eof(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }
  void expect(std::string_view s) {
    if (text_.substr(pos_, s.size()) != s) fail("expected '" + std::string(s) + "'");
    advance(s.size());
  }
  void skip_ws() {
    while (peek() == ' ' || peek() == '\t') advance();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') advance();
  }
  void skip_blank_lines() {
    for (;;) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') advance();
      if (peek() == '\n') {
        advance();
        continue;
      }
      return;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_space_multiline() {
    for (;;) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        advance();
        continue;
      }
      return;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') advance();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected text after value");
    advance();
  }

  std::string key() {
    if (peek() == '"') return basic_string();
    std::string out;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      out += peek();
      advance();
    }
    if (out.empty()) fail("expected a key");
    return out;
  }

  std::string basic_string() {
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char ch = peek();
      if (ch == '"') {
        advance();
        return out;
      }
      if (ch == '\\') {
        advance();
        switch (peek()) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail("unsupported escape sequence");
        }
        advance();
        continue;
      }
      out += ch;
      advance();
    }
  }

  Value value() {
    Value out;
    out.line = line_;
    out.col = col_;
    const char ch = peek();
    if (ch == '"') {
      out.v = basic_string();
    } else if (ch == '\'') {
      advance();
      std::string s;
      while (!eof() && peek() != '\'' && peek() != '\n') {
        s += peek();
        advance();
      }
      expect("'");
      out.v = std::move(s);
    } else if (ch == '[') {
      advance();
      auto arr = std::make_shared<Array>();
      for (;;) {
        skip_space_multiline();
        if (peek() == ']') break;
        arr->push_back(value());
        skip_space_multiline();
        if (peek() == ',') {
          advance();
          continue;
        }
        if (peek() != ']') fail("expected ',' or ']' in array");
      }
      advance();
      out.v = std::move(arr);
    } else if (ch == '{') {
      advance();
      auto tbl = std::make_shared<Table>();
      skip_ws();
      while (peek() != '}') {
        const int l = line_, c = col_;
        std::string k = key();
        skip_ws();
        expect("=");
        skip_ws();
        Value v = value();
        for (const auto& [existing, _] : *tbl)
          if (existing == k) throw ParseError("duplicate key '" + k + "'", l, c);
        tbl->emplace_back(std::move(k), std::move(v));
        skip_ws();
        if (peek() == ',') {
          advance();
          skip_ws();
          continue;
        }
        if (peek() != '}') fail("expected ',' or '}' in inline table");
      }
      advance();
      out.v = std::move(tbl);
    } else if (text_.substr(pos_, 4) == "true") {
      advance(4);
      out.v = true;
    } else if (text_.substr(pos_, 5) == "false") {
      advance(5);
      out.v = false;
    } else {
      std::string num;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                        peek() == '.' || peek() == '_')) {
        if (peek() != '_') num += peek();
        advance();
      }
      if (num.empty()) fail("expected a value");
      const bool is_float = num.find_first_of(".eE") != std::string::npos;
      const char* first = num.data() + (num.front() == '+' ? 1 : 0);
      const char* last = num.data() + num.size();
      if (is_float) {
        double d = 0;
        auto r = std::from_chars(first, last, d);
        if (r.ec != std::errc{} || r.ptr != last) throw ParseError("invalid number '" + num + "'", out.line, out.col);
        out.v = d;
      } else {
        std::int64_t i = 0;
        auto r = std::from_chars(first, last, i);
        if (r.ec != std::errc{} || r.ptr != last)
          throw ParseError("invalid value '" + num + "' (strings need quotes)", out.line, out.col);
        out.v = i;
      }
    }
    return out;
  }

  Table* open_table(Table& root, const std::string& name, bool array, int l, int c) {
    for (auto& [k, v] : root) {
      if (k != name) continue;
      if (array) {
        if (!v.is_array()) throw ParseError("'" + name + "' is not an array of tables", l, c);
        auto& arr = *std::get<std::shared_ptr<Array>>(v.v);
        Value t;
        t.v = std::make_shared<Table>();
        t.line = l;
        t.col = c;
        arr.push_back(t);
        return std::get<std::shared_ptr<Table>>(arr.back().v).get();
      }
      throw ParseError("table [" + name + "] defined twice", l, c);
    }
    Value t;
    t.line = l;
    t.col = c;
    t.v = std::make_shared<Table>();
    Table* inner = std::get<std::shared_ptr<Table>>(t.v).get();
    if (array) {
      Value a;
      a.line = l;
      a.col = c;
      a.v = std::make_shared<Array>(Array{t});
      inner = std::get<std::shared_ptr<Table>>(std::get<std::shared_ptr<Array>>(a.v)->front().v).get();
      root.emplace_back(name, std::move(a));
    } else {
      root.emplace_back(name, std::move(t));
    }
    return inner;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Typed access with positions for error messages.

class Fields {
 public:
  Fields(const Table& t, std::string where, int line = 1, int col = 1)
      : table_(t), where_(std::move(where)), line_(line), col_(col) {}
  Fields(const Value& v, std::string where) : Fields(table_of(v, where), std::move(where), v.line, v.col) {}

  ~Fields() = default;

  const Value* find(std::string_view k) {
    for (const auto& [name, v] : table_)
      if (name == k) {
        used_.insert(name);
        return &v;
      }
    return nullptr;
  }
  const Value& need(std::string_view k) {
    if (const Value* v = find(k)) return *v;
    throw ParseError(where_ + ": missing key '" + std::string(k) + "'", line_, col_);
  }
  // Unknown keys are errors so that typos do not silently fall back to defaults.
  void done() const {
    for (const auto& [name, v] : table_)
      if (!used_.contains(name)) v.fail(where_ + ": unknown key '" + name + "'");
  }

  static const Table& table_of(const Value& v, const std::string& where) {
    if (!v.is_table()) v.fail(where + ": expected a table");
    return *std::get<std::shared_ptr<Table>>(v.v);
  }

 private:
  const Table& table_;
  std::string where_;
  int line_, col_;
  std::set<std::string> used_;
};

std::string as_string(const Value& v) {
  if (!v.is_string()) v.fail("expected a string");
  return std::get<std::string>(v.v);
}

std::int64_t as_int(const Value& v) {
  if (!std::holds_alternative<std::int64_t>(v.v)) v.fail("expected an integer");
  return std::get<std::int64_t>(v.v);
}

std::uint64_t as_uint(const Value& v) {
  const auto i = as_int(v);
  if (i < 0) v.fail("expected a non-negative integer");
  return static_cast<std::uint64_t>(i);
}

double as_double(const Value& v) {
  if (std::holds_alternative<double>(v.v)) return std::get<double>(v.v);
  return static_cast<double>(as_int(v));
}

bool as_bool(const Value& v) {
  if (!std::holds_alternative<bool>(v.v)) v.fail("expected true or false");
  return std::get<bool>(v.v);
}

const Array& as_array(const Value& v) {
  if (!v.is_array()) v.fail("expected an array");
  return *std::get<std::shared_ptr<Array>>(v.v);
}

std::vector<std::string> as_strings(const Value& v) {
  std::vector<std::string> out;
  for (const auto& e : as_array(v)) out.push_back(as_string(e));
  return out;
}

// Durations are strings with a unit ("17.1ms") or bare integers in ns.
TimeNs as_duration(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v.v)) return ns(as_uint(v));
  try {
    return parse_duration(as_string(v));
  } catch (const Error& e) {
    v.fail(e.what());
  }
}

std::int64_t as_signed_duration(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v.v)) return as_int(v);
  std::string s = as_string(v);
  const bool negative = !s.empty() && s.front() == '-';
  if (negative) s.erase(0, 1);
  try {
    const auto t = parse_duration(s).signed_count();
    return negative ? -t : t;
  } catch (const Error& e) {
    v.fail(e.what());
  }
}

template <typename F>
auto convert(const Value& v, F&& f) -> decltype(f(std::string{})) {
  try {
    return f(as_string(v));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    v.fail(e.what());
  }
}

struct Target {
  bool use_max = false;
  TimeNs value;
};

Target as_target(const Value& v) {
  if (v.is_string() && std::get<std::string>(v.v) == "max") return {true, {}};
  return {false, as_duration(v)};
}

DelayHistogram histogram_from(const Value& v, const std::filesystem::path& base, const std::string& which,
                              std::vector<std::string>& problems) {
  if (v.is_string()) {
    std::filesystem::path p = as_string(v);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::exists(p)) {
      problems.push_back(which + " histogram file not found: " + p.string());
      return {};
    }
    try {
      return load_histogram_file(p.string());
    } catch (const HistogramError& e) {
      problems.push_back(which + " histogram " + p.string() + ": " + e.what());
      return {};
    }
  }
  Fields f(v, which + " histogram");
  const TimeNs median = as_duration(f.need("median"));
  const TimeNs max = as_duration(f.need("max"));
  const TimeNs min = as_duration(f.need("min"));
  std::size_t bins = 400;
  if (auto b = f.find("bins")) bins = static_cast<std::size_t>(as_uint(*b));
  f.done();
  try {
    return synth_histogram(median, max, min, bins);
  } catch (const Error& e) {
    v.fail(e.what());
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Table root = Reader(text).document();
  Fields top(root, "scenario");
  Scenario sc;
  std::vector<std::string> problems;

  if (auto e = top.find("experiment")) {
    Fields f(*e, "[experiment]");
    if (auto v = f.find("name")) sc.name = as_string(*v);
    if (auto v = f.find("seed")) sc.seed = as_uint(*v);
    if (auto v = f.find("cycles")) sc.cycles = as_uint(*v);
    if (auto v = f.find("residence")) sc.residence = convert(*v, parse_residence_selector);
    f.done();
  }

  if (auto h = top.find("histograms")) {
    Fields f(*h, "[histograms]");
    sc.uplink = histogram_from(f.need("uplink"), base_dir, "uplink", problems);
    sc.downlink = histogram_from(f.need("downlink"), base_dir, "downlink", problems);
    f.done();
  }

  Link link_defaults;
  if (auto d = top.find("link_defaults")) {
    Fields f(*d, "[link_defaults]");
    if (auto v = f.find("speed_bps")) link_defaults.speed_bps = as_uint(*v);
    if (auto v = f.find("propagation")) link_defaults.propagation = as_duration(*v);
    f.done();
  }
  Stream stream_defaults;
  if (auto d = top.find("stream_defaults")) {
    Fields f(*d, "[stream_defaults]");
    if (auto v = f.find("period")) stream_defaults.period = stream_defaults.deadline = as_duration(*v);
    if (auto v = f.find("deadline")) stream_defaults.deadline = as_duration(*v);
    if (auto v = f.find("frame_size")) stream_defaults.frame_size = static_cast<std::uint32_t>(as_uint(*v));
    if (auto v = f.find("pcp")) stream_defaults.pcp = static_cast<std::uint8_t>(std::min<std::uint64_t>(as_uint(*v), 255));
    if (auto v = f.find("jitter")) stream_defaults.jitter_req = as_duration(*v);
    f.done();
  }

  std::vector<Node> nodes;
  if (auto n = top.find("nodes")) {
    for (const auto& item : as_array(*n)) {
      Fields f(item, "[[nodes]]");
      Node node;
      node.id = as_string(f.need("id"));
      node.kind = convert(f.need("kind"), parse_node_kind);
      if (auto v = f.find("device_side")) node.device_side = as_strings(*v);
      f.done();
      nodes.push_back(std::move(node));
    }
  }
  std::vector<Link> links;
  if (auto l = top.find("links")) {
    for (const auto& item : as_array(*l)) {
      Fields f(item, "[[links]]");
      Link link = link_defaults;
      link.a = as_string(f.need("a"));
      link.b = as_string(f.need("b"));
      link.id = link.a + "--" + link.b;
      if (auto v = f.find("id")) link.id = as_string(*v);
      if (auto v = f.find("speed_bps")) link.speed_bps = as_uint(*v);
      if (auto v = f.find("propagation")) link.propagation = as_duration(*v);
      f.done();
      links.push_back(std::move(link));
    }
  }
  try {
    sc.topology = Topology(nodes, links);
  } catch (const Error& e) {
    problems.push_back(e.what());
  }

  if (auto s = top.find("streams")) {
    for (const auto& item : as_array(*s)) {
      Fields f(item, "[[streams]]");
      Stream st = stream_defaults;
      st.id = as_string(f.need("id"));
      st.talker = as_string(f.need("talker"));
      st.listener = as_string(f.need("listener"));
      if (auto v = f.find("route")) {
        st.route = as_strings(*v);
      } else if (auto p = f.find("path")) {
        // Node path: resolve consecutive pairs to links.
        const auto path = as_strings(*p);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          auto link = sc.topology.link_between(path[i], path[i + 1]);
          if (!link) p->fail("no link between '" + path[i] + "' and '" + path[i + 1] + "'");
          st.route.push_back(sc.topology.links()[*link].id);
        }
      } else {
        auto link = sc.topology.link_between(st.talker, st.listener);
        if (!link) item.fail("stream '" + st.id + "' needs a route or path");
        st.route.push_back(sc.topology.links()[*link].id);
      }
      const bool explicit_deadline = f.find("deadline") != nullptr;
      if (auto v = f.find("period")) {
        st.period = as_duration(*v);
        if (!explicit_deadline) st.deadline = st.period;
      }
      if (auto v = f.find("deadline")) st.deadline = as_duration(*v);
      if (auto v = f.find("phase")) st.phase = as_duration(*v);
      if (auto v = f.find("frame_size")) st.frame_size = static_cast<std::uint32_t>(as_uint(*v));
      if (auto v = f.find("jitter")) st.jitter_req = as_duration(*v);
      if (auto v = f.find("pcp")) st.pcp = static_cast<std::uint8_t>(std::min<std::uint64_t>(as_uint(*v), 255));
      if (auto v = f.find("reliability")) st.reliability = as_double(*v);
      if (auto v = f.find("direction")) {
        st.direction = convert(*v, parse_direction);
      } else if (auto hops = resolve_route(sc.topology, st)) {
        // Inferred from which side of the 6G bridge the stream enters.
        for (const Hop& hop : *hops)
          if (sc.topology.nodes()[hop.to].kind == NodeKind::SixgBridge)
            st.direction = sc.topology.is_device_side(hop.to, hop.link) ? Direction::Uplink : Direction::Downlink;
      }
      f.done();
      sc.streams.push_back(std::move(st));
    }
  }

  Target def{}, def_up{}, def_down{};
  bool has_def = false, has_up = false, has_down = false;
  std::vector<std::pair<std::string, Target>> mapping;
  if (auto p = top.find("pdc")) {
    Fields f(*p, "[pdc]");
    if (auto v = f.find("mode")) sc.pdc.mode = convert(*v, parse_pdc_mode);
    if (auto v = f.find("default")) def = as_target(*v), has_def = true;
    if (auto v = f.find("default_uplink")) def_up = as_target(*v), has_up = true;
    if (auto v = f.find("default_downlink")) def_down = as_target(*v), has_down = true;
    if (auto v = f.find("slot")) sc.pdc.slot_size = as_duration(*v);
    if (auto v = f.find("drop_late")) sc.pdc.drop_late = as_bool(*v);
    if (auto v = f.find("emulate_uniform_jitter")) sc.pdc.emulate_uniform_jitter = as_bool(*v);
    if (auto v = f.find("sync_error")) sc.pdc.sync_error_ns = as_signed_duration(*v);
    if (auto v = f.find("mapping")) {
      for (const auto& m : as_array(*v)) {
        Fields mf(m, "pdc mapping");
        mapping.emplace_back(as_string(mf.need("stream")), as_target(mf.need("target")));
        mf.done();
      }
    }
    f.done();
  }
  top.done();

  if (sc.uplink.bins().empty() || sc.downlink.bins().empty()) {
    const bool wireless = std::any_of(sc.streams.begin(), sc.streams.end(),
                                      [](const Stream& s) { return s.direction != Direction::Wired; });
    if (wireless && problems.empty()) problems.push_back("wireless streams need [histograms] uplink and downlink");
  }
  for (auto& p : validate_scenario(sc.topology, sc.streams)) problems.push_back(std::move(p));
  if (!problems.empty()) throw ValidationError(problems);

  // "max" resolves to the histogram maximum of the stream's direction.
  auto resolve = [&](const Target& t, Direction d) {
    if (!t.use_max) return t.value;
    const DelayHistogram& h = d == Direction::Downlink ? sc.downlink : sc.uplink;
    return h.bins().empty() ? TimeNs{} : h.max_delay();
  };
  if (has_def) sc.pdc.default_target = resolve(def, Direction::Uplink);
  if (has_up || (has_def && def.use_max)) sc.pdc.default_uplink = resolve(has_up ? def_up : def, Direction::Uplink);
  if (has_down || (has_def && def.use_max))
    sc.pdc.default_downlink = resolve(has_down ? def_down : def, Direction::Downlink);
  for (const auto& [id, t] : mapping) {
    auto it = std::find_if(sc.streams.begin(), sc.streams.end(), [&](const Stream& s) { return s.id == id; });
    if (it == sc.streams.end()) problems.push_back("pdc mapping names unknown stream '" + id + "'");
    else sc.pdc.per_stream[id] = resolve(t, it->direction);
  }
  if (sc.pdc.mode != PdcMode::Off) {
    for (const auto& s : sc.streams)
      if (s.direction != Direction::Wired && sc.pdc.target_for(s.id, s.direction) == TimeNs{})
        problems.push_back("stream '" + s.id + "' has no PDC target");
    if (problems.empty() && !sc.uplink.bins().empty()) {
      try {
        sc.warnings = normalize_pdc(sc.pdc, std::max(sc.uplink.max_delay(), sc.downlink.max_delay()));
      } catch (const Error& e) {
        problems.push_back(e.what());
      }
    }
  }
  if (sc.residence == ResidenceSelector::Pdc && sc.pdc.mode == PdcMode::Off &&
      std::any_of(sc.streams.begin(), sc.streams.end(), [](const Stream& s) { return s.direction != Direction::Wired; }))
    problems.push_back("residence = \"pdc\" requires a PDC mode");
  if (sc.cycles == 0) problems.push_back("cycles must be at least 1");
  if (!problems.empty()) throw ValidationError(problems);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read scenario " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(), std::filesystem::path(path).parent_path());
}

ResidenceInterval pdc_interval(const PdcConfig& config, TimeNs target) {
  ResidenceInterval r{target, target};
  if (config.mode == PdcMode::VirtualSlot) {
    if (config.emulate_uniform_jitter)
      r.hi = target + config.slot_size - ns(1);
    else
      r.lo = target - std::min(target, config.slot_size - ns(1));
  }
  const TimeNs skew = ns(static_cast<std::uint64_t>(config.sync_error_ns < 0 ? -config.sync_error_ns : config.sync_error_ns));
  r.lo = r.lo - std::min(r.lo, skew);
  r.hi = r.hi + skew;
  return r;
}

void override_selection(Scenario& sc, std::optional<ResidenceSelector> residence, std::optional<PdcMode> pdc_mode) {
  if (residence) sc.residence = *residence;
  if (pdc_mode) {
    sc.pdc.mode = *pdc_mode;
    if (sc.pdc.mode != PdcMode::Off && !sc.uplink.bins().empty() && !sc.downlink.bins().empty()) {
      try {
        sc.warnings = normalize_pdc(sc.pdc, std::max(sc.uplink.max_delay(), sc.downlink.max_delay()));
      } catch (const BadParams& e) {
        throw ValidationError({e.what()});
      }
    }
  }
  if (sc.residence == ResidenceSelector::Pdc && sc.pdc.mode == PdcMode::Off)
    for (const auto& s : sc.streams)
      if (s.direction != Direction::Wired)
        throw ValidationError({"residence = \"pdc\" requires a PDC mode (stream '" + s.id + "')"});
}

ResidenceModel residence_model(const Scenario& sc) {
  auto quantile_or_zero = [](const DelayHistogram& h, double p) {
    return h.bins().empty() ? TimeNs{} : h.quantile(p);
  };
  switch (sc.residence) {
    case ResidenceSelector::Med:
      return ResidenceModel::constant(quantile_or_zero(sc.uplink, 0.5), quantile_or_zero(sc.downlink, 0.5));
    case ResidenceSelector::Max:
      return ResidenceModel::constant(quantile_or_zero(sc.uplink, 1.0), quantile_or_zero(sc.downlink, 1.0));
    case ResidenceSelector::Pdc: break;
  }
  ResidenceModel m;
  m.kind = ResidenceModel::Kind::Interval;
  if (sc.pdc.mode == PdcMode::Off) return m;
  m.uplink = pdc_interval(sc.pdc, sc.pdc.target_for("", Direction::Uplink));
  m.downlink = pdc_interval(sc.pdc, sc.pdc.target_for("", Direction::Downlink));
  for (const auto& s : sc.streams)
    if (s.direction != Direction::Wired) m.per_stream[s.id] = pdc_interval(sc.pdc, sc.pdc.target_for(s.id, s.direction));
  m.validate();
  return m;
}

}  // namespace tsnpdc
