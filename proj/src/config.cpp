#include "drsubmax/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "drsubmax/errors.hpp"

namespace drsubmax {

namespace {

// ---------------------------------------------------------------- TOML subset

struct TomlReader {
  const std::string& text;
  std::size_t pos = 0;

  explicit TomlReader(const std::string& t) : text(t) {}

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_space_on_line() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }

  void skip_comment() {
    if (!done() && peek() == '#')
      while (!done() && peek() != '\n') ++pos;
  }

  // Whitespace, comments and newlines; used inside arrays and between lines.
  void skip_filler() {
    while (!done()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("TOML parse error at line " + std::to_string(line) + ": " +
                      what);
  }

  std::string bare_key() {
    std::size_t start = pos;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                       peek() == '_' || peek() == '-'))
      ++pos;
    if (pos == start) fail("expected a key");
    return text.substr(start, pos - start);
  }

  std::string quoted_string() {
    ++pos;  // opening quote
    std::string out;
    while (!done() && peek() != '"') {
      char c = text[pos++];
      if (c == '\\' && !done()) {
        const char esc = text[pos++];
        switch (esc) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail("unsupported escape");
        }
      }
      out.push_back(c);
    }
    if (done()) fail("unterminated string");
    ++pos;  // closing quote
    return out;
  }

  nlohmann::json value() {
    skip_filler();
    if (done()) fail("expected a value");
    const char c = peek();
    if (c == '"') return quoted_string();
    if (c == '[') {
      ++pos;
      nlohmann::json arr = nlohmann::json::array();
      skip_filler();
      while (!done() && peek() != ']') {
        arr.push_back(value());
        skip_filler();
        if (!done() && peek() == ',') {
          ++pos;
          skip_filler();
        }
      }
      if (done()) fail("unterminated array");
      ++pos;
      return arr;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string word = bare_key();
      if (word == "true") return true;
      if (word == "false") return false;
      fail("unknown literal '" + word + "'");
    }
    // number
    std::size_t start = pos;
    bool is_float = false;
    while (!done()) {
      const char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '+' || ch == '-' ||
          ch == '_') {
        ++pos;
      } else if (ch == '.' || ch == 'e' || ch == 'E') {
        is_float = true;
        ++pos;
      } else {
        break;
      }
    }
    std::string num = text.substr(start, pos - start);
    num.erase(std::remove(num.begin(), num.end(), '_'), num.end());
    if (num.empty()) fail("expected a number");
    try {
      if (is_float) return std::stod(num);
      return static_cast<std::int64_t>(std::stoll(num));
    } catch (const std::exception&) {
      fail("bad number '" + num + "'");
    }
  }
};

}  // namespace

nlohmann::json toml_to_json(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  TomlReader r(text);
  while (true) {
    r.skip_filler();
    if (r.done()) break;
    if (r.peek() == '[') {
      ++r.pos;
      nlohmann::json* node = &root;
      while (true) {
        r.skip_space_on_line();
        const std::string part = r.bare_key();
        node = &(*node)[part];
        if (node->is_null()) *node = nlohmann::json::object();
        r.skip_space_on_line();
        if (!r.done() && r.peek() == '.') {
          ++r.pos;
          continue;
        }
        break;
      }
      if (r.done() || r.peek() != ']') r.fail("expected ']'");
      ++r.pos;
      table = node;
    } else {
      const std::string key = r.bare_key();
      r.skip_space_on_line();
      if (r.done() || r.peek() != '=') r.fail("expected '=' after key");
      ++r.pos;
      r.skip_space_on_line();
      (*table)[key] = r.value();
    }
    r.skip_space_on_line();
    r.skip_comment();
    if (!r.done() && r.peek() != '\n' && r.peek() != '\r')
      r.fail("trailing characters after value");
  }
  return root;
}

// ------------------------------------------------------------- field helpers

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& name, const std::string& why) {
  throw ConfigError("config field '" + name + "': " + why);
}

const json* find(const json& doc, const std::string& name) {
  const auto it = doc.find(name);
  return it == doc.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& name) {
  if (!v.is_number()) bad_field(name, "expected a number");
  return v.get<double>();
}

long as_int(const json& v, const std::string& name) {
  if (!v.is_number_integer()) bad_field(name, "expected an integer");
  return v.get<long>();
}

std::string as_string(const json& v, const std::string& name) {
  if (!v.is_string()) bad_field(name, "expected a string");
  return v.get<std::string>();
}

Eigen::VectorXd as_vector(const json& v, const std::string& name) {
  if (!v.is_array()) bad_field(name, "expected an array");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out(i) = as_double(v[i], name + "[" + std::to_string(i) + "]");
  return out;
}

Eigen::MatrixXd as_matrix(const json& v, const std::string& name, int cols) {
  if (!v.is_array()) bad_field(name, "expected an array of rows");
  Eigen::MatrixXd out(v.size(), cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Eigen::VectorXd row = as_vector(v[i], name + " row");
    if (row.size() != cols) bad_field(name, "row length must equal d");
    out.row(i) = row.transpose();
  }
  return out;
}

}  // namespace

ConvexBody body_from_json(const nlohmann::json& doc, double tol) {
  const json* dval = find(doc, "d");
  if (!dval) bad_field("body.d", "missing");
  const int d = static_cast<int>(as_int(*dval, "body.d"));

  Eigen::MatrixXd a(0, d);
  Eigen::VectorXd b(0);
  if (const json* av = find(doc, "A")) {
    a = as_matrix(*av, "body.A", d);
    const json* bv = find(doc, "b");
    if (!bv) bad_field("body.b", "missing while A is present");
    b = as_vector(*bv, "body.b");
    if (b.size() != a.rows()) bad_field("body.b", "length must match rows of A");
  }
  Eigen::MatrixXd e(0, d);
  Eigen::VectorXd f(0);
  if (const json* ev = find(doc, "E")) {
    e = as_matrix(*ev, "body.E", d);
    const json* fv = find(doc, "f");
    if (!fv) bad_field("body.f", "missing while E is present");
    f = as_vector(*fv, "body.f");
    if (f.size() != e.rows()) bad_field("body.f", "length must match rows of E");
  }
  BodyFlags flags;
  if (const json* fl = find(doc, "flags")) {
    if (const json* dc = find(*fl, "down_closed")) {
      if (!dc->is_boolean()) bad_field("body.flags.down_closed", "expected a bool");
      flags.down_closed = dc->get<bool>();
    }
  }
  return build_body(a, b, e, f, d, flags, tol);
}

namespace {

RunMode parse_mode(const std::string& s) {
  if (s == "offline") return RunMode::offline;
  if (s == "online") return RunMode::online;
  if (s == "sweep") return RunMode::sweep;
  if (s == "baseline") return RunMode::baseline;
  bad_field("run.mode", "unknown mode '" + s + "'");
}

FwVariant parse_variant(const std::string& s) {
  if (s == "A") return FwVariant::A_monotone_origin;
  if (s == "B") return FwVariant::B_nonmonotone_down_closed;
  if (s == "C") return FwVariant::C_monotone_general;
  if (s == "D") return FwVariant::D_nonmonotone_general;
  bad_field("run.variant", "unknown variant '" + s + "' (expected A, B, C or D)");
}

OracleCase parse_case(long c) {
  if (c < 1 || c > 4) bad_field("run.case", "expected 1, 2, 3 or 4");
  return static_cast<OracleCase>(c);
}

Feedback parse_feedback(const std::string& s) {
  if (s == "bandit") return Feedback::bandit;
  if (s == "semi_bandit") return Feedback::semi_bandit;
  bad_field("run.feedback", "unknown feedback '" + s + "'");
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  ExperimentConfig cfg;

  const json* body = find(doc, "body");
  if (!body) bad_field("body", "missing section");
  const json* dval = find(*body, "d");
  if (!dval) bad_field("body.d", "missing");
  cfg.dim = static_cast<int>(as_int(*dval, "body.d"));
  cfg.ineq_coeffs.resize(0, cfg.dim);
  cfg.eq_coeffs.resize(0, cfg.dim);
  if (const json* av = find(*body, "A")) {
    cfg.ineq_coeffs = as_matrix(*av, "body.A", cfg.dim);
    const json* bv = find(*body, "b");
    if (!bv) bad_field("body.b", "missing while A is present");
    cfg.ineq_rhs = as_vector(*bv, "body.b");
    if (cfg.ineq_rhs.size() != cfg.ineq_coeffs.rows())
      bad_field("body.b", "length must match rows of A");
  }
  if (const json* ev = find(*body, "E")) {
    cfg.eq_coeffs = as_matrix(*ev, "body.E", cfg.dim);
    const json* fv = find(*body, "f");
    if (!fv) bad_field("body.f", "missing while E is present");
    cfg.eq_rhs = as_vector(*fv, "body.f");
    if (cfg.eq_rhs.size() != cfg.eq_coeffs.rows())
      bad_field("body.f", "length must match rows of E");
  }
  if (const json* fl = find(*body, "flags")) {
    if (const json* dc = find(*fl, "down_closed")) {
      if (!dc->is_boolean()) bad_field("body.flags.down_closed", "expected a bool");
      cfg.flags.down_closed = dc->get<bool>();
    }
  }

  const json* objective = find(doc, "objective");
  if (!objective) bad_field("objective", "missing section");
  const json* kind = find(*objective, "kind");
  if (!kind) bad_field("objective.kind", "missing");
  cfg.objective_kind = as_string(*kind, "objective.kind");
  if (cfg.objective_kind == "dr_quadratic") {
    const json* h = find(*objective, "H");
    const json* h0 = find(*objective, "h0");
    if (!h) bad_field("objective.H", "missing");
    if (!h0) bad_field("objective.h0", "missing");
    cfg.quad = as_matrix(*h, "objective.H", cfg.dim);
    cfg.lin = as_vector(*h0, "objective.h0");
    if (cfg.lin.size() != cfg.dim) bad_field("objective.h0", "length must equal d");
    if (const json* c0 = find(*objective, "c0"))
      cfg.constant = as_double(*c0, "objective.c0");
  } else if (cfg.objective_kind == "coverage") {
    const json* sets = find(*objective, "sets");
    const json* weights = find(*objective, "weights");
    if (!sets) bad_field("objective.sets", "missing");
    if (!weights) bad_field("objective.weights", "missing");
    if (!sets->is_array()) bad_field("objective.sets", "expected an array of sets");
    for (const auto& s : *sets) {
      std::vector<int> set;
      for (const auto& e : s)
        set.push_back(static_cast<int>(as_int(e, "objective.sets element")));
      cfg.cover_sets.push_back(std::move(set));
    }
    cfg.cover_weights = as_vector(*weights, "objective.weights");
  } else {
    bad_field("objective.kind", "unknown kind '" + cfg.objective_kind + "'");
  }

  if (const json* oracle = find(doc, "oracle")) {
    if (const json* s0 = find(*oracle, "sigma0"))
      cfg.sigma0 = as_double(*s0, "oracle.sigma0");
    if (const json* s1 = find(*oracle, "sigma1"))
      cfg.sigma1 = as_double(*s1, "oracle.sigma1");
  }

  const json* run = find(doc, "run");
  if (!run) bad_field("run", "missing section");
  const json* mode = find(*run, "mode");
  if (!mode) bad_field("run.mode", "missing");
  cfg.mode = parse_mode(as_string(*mode, "run.mode"));
  if (const json* v = find(*run, "variant"))
    cfg.variant = parse_variant(as_string(*v, "run.variant"));
  if (const json* c = find(*run, "case"))
    cfg.oracle_case = parse_case(as_int(*c, "run.case"));
  if (const json* n = find(*run, "N"))
    cfg.iterations = static_cast<int>(as_int(*n, "run.N"));
  if (const json* b = find(*run, "B"))
    cfg.batch = static_cast<int>(as_int(*b, "run.B"));
  if (const json* d = find(*run, "delta"))
    cfg.delta = as_double(*d, "run.delta");
  if (const json* e = find(*run, "eps_target")) {
    cfg.has_eps_target = true;
    cfg.eps_target = as_double(*e, "run.eps_target");
  }
  if (const json* s = find(*run, "seeds")) {
    if (!s->is_array() || s->empty())
      bad_field("run.seeds", "expected a non-empty array");
    cfg.seeds.clear();
    for (const auto& e : *s)
      cfg.seeds.push_back(static_cast<std::uint64_t>(as_int(e, "run.seeds")));
  }
  if (const json* t = find(*run, "T")) cfg.horizon = as_int(*t, "run.T");
  if (const json* fb = find(*run, "feedback"))
    cfg.feedback = parse_feedback(as_string(*fb, "run.feedback"));
  if (const json* g = find(*run, "grid")) {
    if (!g->is_array()) bad_field("run.grid", "expected an array");
    for (const auto& e : *g) cfg.sweep_grid.push_back(as_int(e, "run.grid"));
  }
  if (const json* so = find(*run, "sweep_over")) {
    cfg.sweep_over = as_string(*so, "run.sweep_over");
    if (cfg.sweep_over != "N" && cfg.sweep_over != "T")
      bad_field("run.sweep_over", "expected 'N' or 'T'");
  }
  if (const json* m = find(*run, "m"))
    cfg.baseline_resolution = static_cast<int>(as_int(*m, "run.m"));
  if (const json* lc = find(*run, "lemma_c"))
    cfg.lemma_c = as_double(*lc, "run.lemma_c");
  if (const json* o = find(*run, "out")) cfg.out_path = as_string(*o, "run.out");

  // Cross-field checks mirroring what the solver will reject, reported with
  // the config field name.
  if (cfg.mode == RunMode::offline || cfg.mode == RunMode::sweep) {
    if (cfg.iterations < 4) bad_field("run.N", "must be at least 4");
    if (cfg.batch < 1) bad_field("run.B", "must be at least 1");
  }
  if (cfg.mode == RunMode::online && cfg.sweep_grid.empty() && cfg.horizon < 4)
    bad_field("run.T", "must be at least 4");
  if (cfg.mode == RunMode::sweep && cfg.sweep_grid.empty())
    bad_field("run.grid", "sweep needs a non-empty grid");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const bool json_ext = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  const bool toml_ext = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  bool looks_json = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    looks_json = c == '{';
    break;
  }
  try {
    if (json_ext || (looks_json && !toml_ext))
      return config_from_json(nlohmann::json::parse(text));
    return config_from_json(toml_to_json(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
}

ConvexBody build_config_body(const ExperimentConfig& cfg) {
  return build_body(cfg.ineq_coeffs, cfg.ineq_rhs, cfg.eq_coeffs, cfg.eq_rhs,
                    cfg.dim, cfg.flags);
}

Objective build_config_objective(const ExperimentConfig& cfg) {
  if (cfg.objective_kind == "dr_quadratic")
    return make_dr_quadratic(cfg.quad, cfg.lin, cfg.constant);
  return make_coverage(cfg.cover_sets, cfg.cover_weights, cfg.dim);
}

}  // namespace drsubmax
