#include "fncalc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "fncalc/error.hpp"
#include "fncalc/expr_parser.hpp"
#include "fncalc/mc.hpp"

namespace fncalc {

const Value* Value::find(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

namespace {

// ---------------------------------------------------------------- syntax

enum class Tok { LBrace, RBrace, LBracket, RBracket, Comma, Colon, String, Number, Word, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  Token next() {
    skip_space();
    const std::size_t line = line_, col = col_;
    if (pos_ >= s_.size()) return {Tok::End, "", line, col};
    const char c = s_[pos_];
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), line, col};
    };
    switch (c) {
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case ':': return single(Tok::Colon);
      case '=': return single(Tok::Colon);
      default: break;
    }
    if (c == '"') return string_token(line, col);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
      std::string t(1, c);
      advance();
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
        t += advance();
      if (t == "-" || t == "+") throw ParseError("unexpected '" + t + "'", line, col);
      return {Tok::Number, t, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string t;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        t += advance();
      return {Tok::Word, t, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  char advance() {
    const char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token string_token(std::size_t line, std::size_t col) {
    advance();
    std::string t;
    while (true) {
      if (pos_ >= s_.size() || s_[pos_] == '\n') throw ParseError("unterminated string", line, col);
      const char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) throw ParseError("unterminated string", line, col);
        t += advance();
      } else {
        t += c;
      }
    }
    return {Tok::String, t, line, col};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class DocParser {
 public:
  explicit DocParser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  Document parse() {
    Document doc;
    while (tok_.kind != Tok::End) {
      const Token head = expect(Tok::Word, "a block or setting name");
      if (tok_.kind == Tok::Colon) {
        shift();
        doc.settings.emplace_back(head.text, value());
        continue;
      }
      Block b;
      b.kind = head.text;
      b.line = head.line;
      b.column = head.column;
      if (tok_.kind == Tok::Word || tok_.kind == Tok::String) b.name = shift().text;
      if (tok_.kind != Tok::LBrace) fail("expected '{'");
      b.body = value();
      doc.blocks.push_back(std::move(b));
    }
    return doc;
  }

 private:
  Token shift() {
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const std::string found = tok_.kind == Tok::End ? "end of input" : "'" + tok_.text + "'";
    throw ParseError(what + ", found " + found, tok_.line, tok_.column);
  }

  Token expect(Tok k, const std::string& what) {
    if (tok_.kind != k) fail("expected " + what);
    return shift();
  }

  Value value() {
    Value v;
    v.line = tok_.line;
    v.column = tok_.column;
    switch (tok_.kind) {
      case Tok::String:
        v.kind = Value::Kind::String;
        v.text = shift().text;
        return v;
      case Tok::Number:
        v.kind = Value::Kind::Number;
        v.text = shift().text;
        return v;
      case Tok::Word:
        v.kind = Value::Kind::Word;
        v.text = shift().text;
        return v;
      case Tok::LBracket:
        shift();
        v.kind = Value::Kind::List;
        while (tok_.kind != Tok::RBracket) {
          if (tok_.kind == Tok::End) fail("expected ']'");
          v.items.push_back(value());
          if (tok_.kind == Tok::Comma) shift();
        }
        shift();
        return v;
      case Tok::LBrace: {
        shift();
        v.kind = Value::Kind::Object;
        std::set<std::string> seen;
        while (tok_.kind != Tok::RBrace) {
          if (tok_.kind != Tok::Word && tok_.kind != Tok::String) fail("expected a key or '}'");
          const Token key = shift();
          if (!seen.insert(key.text).second) throw ParseError("duplicate key '" + key.text + "'", key.line, key.column);
          expect(Tok::Colon, "':'");
          v.fields.emplace_back(key.text, value());
          if (tok_.kind == Tok::Comma) shift();
        }
        shift();
        return v;
      }
      default:
        fail("expected a value");
    }
  }

  Lexer lex_;
  Token tok_;
};

// ------------------------------------------------------------ resolution

[[noreturn]] void fail_at(const Value& v, const std::string& what) { throw ParseError(what, v.line, v.column); }

std::string describe(const Param& p) {
  switch (p.index()) {
    case 3: return "a scalar";
    case 4: return "a vector field";
    case 5: return "a form";
    case 6: return "a tangent-valued form";
    case 7: return "a distribution";
    case 8: return "a couple";
    case 9: return "a flag";
    case 10: return "a hypersurface";
    default: return "a value";
  }
}

long to_integer(const Value& v) {
  if (v.kind != Value::Kind::Number || v.text.find('/') != std::string::npos) fail_at(v, "expected an integer");
  try {
    return std::stol(v.text);
  } catch (const std::exception&) {
    fail_at(v, "integer out of range");
  }
}

bool to_bool(const Value& v) {
  if (!v.is_bool()) fail_at(v, "expected true or false");
  return v.text == "true";
}

std::string to_word(const Value& v) {
  if (v.kind != Value::Kind::Word && v.kind != Value::Kind::String) fail_at(v, "expected a name");
  return v.text;
}

void require_object(const Value& v, const std::string& what) {
  if (v.kind != Value::Kind::Object) fail_at(v, "expected { ... } for " + what);
}

void allow_keys(const Value& body, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : body.fields)
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail_at(v, "unknown key '" + k + "'");
}

const Value& required(const Value& body, std::string_view key, const Value& where) {
  const Value* v = body.find(key);
  if (!v) fail_at(where, "missing key '" + std::string(key) + "'");
  return *v;
}

Scalar parse_scalar_at(const Value& v, std::span<const std::string> names) {
  try {
    return parse_scalar(v.text, names);
  } catch (const ParseError& e) {
    const std::size_t offset = v.kind == Value::Kind::String ? 1 : 0;
    throw ParseError(e.reason(), v.line, v.column + offset + e.column() - 1);
  }
}

class Resolver {
 public:
  Scenario run(const Document& doc) {
    for (const auto& [key, v] : doc.settings) {
      if (key == "seed") {
        const long s = to_integer(v);
        if (s < 0) fail_at(v, "seed must be non-negative");
        seed_ = static_cast<std::uint64_t>(s);
      } else if (key == "cap") {
        const long c = to_integer(v);
        if (c < 1 || c > 1000) fail_at(v, "cap must be in [1, 1000]");
        cap_ = static_cast<int>(c);
      } else {
        fail_at(v, "unknown setting '" + key + "'");
      }
    }
    for (const Block& b : doc.blocks) block(b);
    if (!chart_) throw ParseError("no chart declared", 1, 1);
    return Scenario{*chart_, complex_, seed_, cap_, order_, std::move(checks_)};
  }

 private:
  const Chart& chart_at(const Block& b) const {
    if (!chart_) throw ParseError("'" + b.kind + "' before the chart declaration", b.line, b.column);
    return *chart_;
  }

  std::span<const std::string> names() const { return chart_->names(); }

  void define(const Block& b, Param p) {
    if (b.name.empty()) throw ParseError("'" + b.kind + "' needs a name", b.line, b.column);
    if (objects_.count(b.name)) throw ParseError("duplicate name '" + b.name + "'", b.line, b.column);
    objects_.emplace(b.name, std::move(p));
    order_.push_back(b.name);
  }

  const Param& lookup(const Value& v) const {
    if (v.kind != Value::Kind::Word) fail_at(v, "expected a name");
    const auto it = objects_.find(v.text);
    if (it == objects_.end()) fail_at(v, "undefined name '" + v.text + "'");
    return it->second;
  }

  template <class T>
  const T& lookup_as(const Value& v, const std::string& what) const {
    const Param& p = lookup(v);
    const T* t = std::get_if<T>(&p);
    if (!t) fail_at(v, "'" + v.text + "' is " + describe(p) + ", expected " + what);
    return *t;
  }

  void block(const Block& b) {
    require_object(b.body, "'" + b.kind + "'");
    const Value& body = b.body;
    if (b.kind == "chart" || b.kind == "complex_chart") {
      if (chart_) throw ParseError("second chart declaration", b.line, b.column);
      if (b.kind == "chart") {
        allow_keys(body, {"coords"});
        const Value& coords = required(body, "coords", body);
        if (coords.kind != Value::Kind::List || coords.items.empty()) fail_at(coords, "expected a list of names");
        std::vector<std::string> ns;
        for (const Value& c : coords.items) {
          const std::string n = to_word(c);
          if (std::find(ns.begin(), ns.end(), n) != ns.end()) fail_at(c, "duplicate coordinate '" + n + "'");
          ns.push_back(n);
        }
        if (ns.size() > 16) fail_at(coords, "at most 16 coordinates");
        chart_ = Chart(ns);
      } else {
        allow_keys(body, {"n", "metric"});
        const Value& nv = required(body, "n", body);
        const long n = to_integer(nv);
        if (n < 1 || n > 4) fail_at(nv, "complex dimension must be in [1, 4]");
        chart_ = ComplexChart::standard(static_cast<int>(n)).chart();
        std::optional<Matrix> metric;
        if (const Value* m = body.find("metric")) metric = matrix(*m, 2 * static_cast<int>(n));
        try {
          complex_ = ComplexChart(*chart_, metric);
        } catch (const Error& e) {
          fail_at(body.find("metric") ? *body.find("metric") : body, e.what());
        }
      }
      return;
    }
    const Chart& chart = chart_at(b);
    if (b.kind == "check") return check(b);
    try {
      if (b.kind == "scalar") {
        allow_keys(body, {"value"});
        define(b, scalar(required(body, "value", body)));
      } else if (b.kind == "vector") {
        allow_keys(body, {"components"});
        define(b, vector(required(body, "components", body)));
      } else if (b.kind == "form") {
        allow_keys(body, {"terms", "degree"});
        define(b, form(body));
      } else if (b.kind == "vvform") {
        allow_keys(body, {"matrix", "degree", "components"});
        define(b, vvform(body));
      } else if (b.kind == "distribution") {
        allow_keys(body, {"generators", "kernel"});
        define(b, distribution(body));
      } else if (b.kind == "couple") {
        allow_keys(body, {"gamma", "x"});
        const Value& g = required(body, "gamma", body);
        KForm gamma = form(g);
        VectorField x = vector(required(body, "x", body));
        try {
          define(b, DefiningCouple(std::move(gamma), std::move(x)));
        } catch (const PreconditionViolation& e) {
          fail_at(g, e.what());
        }
      } else if (b.kind == "flag") {
        allow_keys(body, {"frame", "s", "d", "distribution"});
        define(b, flag(body));
      } else if (b.kind == "hypersurface") {
        allow_keys(body, {"r", "metric"});
        if (!complex_) throw ParseError("hypersurface needs a complex_chart", b.line, b.column);
        ComplexChart cc = *complex_;
        if (const Value* m = body.find("metric")) {
          try {
            cc = ComplexChart(chart, matrix(*m, chart.dim()));
          } catch (const PreconditionViolation& e) {
            fail_at(*m, e.what());
          }
        }
        const Value& rv = required(body, "r", body);
        try {
          define(b, Hypersurface(std::move(cc), scalar(rv)));
        } catch (const PreconditionViolation& e) {
          fail_at(rv, e.what());
        }
      } else {
        throw ParseError("unknown block '" + b.kind + "'", b.line, b.column);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), b.line, b.column);
    }
  }

  Scalar scalar(const Value& v) const {
    if (v.kind == Value::Kind::String || v.kind == Value::Kind::Number) return parse_scalar_at(v, names());
    return lookup_as<Scalar>(v, "a scalar");
  }

  Matrix matrix(const Value& v, int n) const {
    if (v.kind != Value::Kind::List || static_cast<int>(v.items.size()) != n)
      fail_at(v, "expected " + std::to_string(n) + " rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const Value& row = v.items[static_cast<std::size_t>(i)];
      if (row.kind != Value::Kind::List || static_cast<int>(row.items.size()) != n)
        fail_at(row, "expected " + std::to_string(n) + " entries");
      for (int j = 0; j < n; ++j) m(i, j) = scalar(row.items[static_cast<std::size_t>(j)]);
    }
    return m;
  }

  VectorField vector(const Value& v) const {
    if (v.kind == Value::Kind::Word) return lookup_as<VectorField>(v, "a vector field");
    if (v.kind != Value::Kind::List) fail_at(v, "expected a vector field");
    const int n = chart_->dim();
    if (static_cast<int>(v.items.size()) != n)
      fail_at(v, "expected " + std::to_string(n) + " components, found " + std::to_string(v.items.size()));
    std::vector<Scalar> comps;
    for (const Value& c : v.items) comps.push_back(scalar(c));
    return VectorField(*chart_, std::move(comps));
  }

  std::vector<int> indices(const Value& idx) const {
    if (idx.kind != Value::Kind::List) fail_at(idx, "expected a list of coordinate names");
    std::vector<int> out;
    for (const Value& c : idx.items) {
      const std::string n = to_word(c);
      const auto& ns = chart_->names();
      const auto it = std::find(ns.begin(), ns.end(), n);
      if (it == ns.end()) fail_at(c, "unknown coordinate '" + n + "'");
      out.push_back(static_cast<int>(it - ns.begin()));
    }
    return out;
  }

  // Term list [{idx: [...], coef: "..."}], or an object with terms and degree.
  KForm form(const Value& v) const {
    if (v.kind == Value::Kind::Word) return lookup_as<KForm>(v, "a form");
    const Value* terms = &v;
    std::optional<int> degree;
    if (v.kind == Value::Kind::Object) {
      terms = &required(v, "terms", v);
      if (const Value* dv = v.find("degree")) {
        const long k = to_integer(*dv);
        if (k < 0 || k > chart_->dim()) fail_at(*dv, "degree out of range");
        degree = static_cast<int>(k);
      }
    }
    if (terms->kind != Value::Kind::List) fail_at(*terms, "expected a list of terms");
    std::vector<std::pair<std::vector<int>, Scalar>> parsed;
    for (const Value& t : terms->items) {
      require_object(t, "a form term");
      allow_keys(t, {"idx", "coef"});
      std::vector<int> idx = indices(required(t, "idx", t));
      if (!degree) degree = static_cast<int>(idx.size());
      if (static_cast<int>(idx.size()) != *degree)
        fail_at(t, "term of degree " + std::to_string(idx.size()) + " in a form of degree " + std::to_string(*degree));
      const Value* c = t.find("coef");
      parsed.emplace_back(std::move(idx), c ? scalar(*c) : Scalar(1));
    }
    if (!degree) fail_at(v, "empty form needs an explicit degree");
    return KForm::from_terms(*chart_, *degree, parsed);
  }

  VVForm vvform(const Value& v) const {
    if (v.kind == Value::Kind::Word) {
      const Param& p = lookup(v);
      if (const auto* f = std::get_if<Flag>(&p)) return f->phi;
      if (const auto* c = std::get_if<DefiningCouple>(&p)) return couple_to_endo(*c);
      return lookup_as<VVForm>(v, "a tangent-valued form");
    }
    if (v.kind == Value::Kind::List) return VVForm::from_endo_matrix(*chart_, matrix(v, chart_->dim()));
    require_object(v, "a tangent-valued form");
    if (const Value* m = v.find("matrix")) {
      if (v.find("components")) fail_at(v, "give either matrix or components");
      return VVForm::from_endo_matrix(*chart_, matrix(*m, chart_->dim()));
    }
    const Value& comps = required(v, "components", v);
    const Value& dv = required(v, "degree", v);
    const long k = to_integer(dv);
    if (k < 0 || k > chart_->dim()) fail_at(dv, "degree out of range");
    const int n = chart_->dim();
    if (comps.kind != Value::Kind::List || static_cast<int>(comps.items.size()) != n)
      fail_at(comps, "expected " + std::to_string(n) + " component forms");
    std::vector<KForm> forms;
    for (const Value& c : comps.items) {
      Value wrapped;
      wrapped.kind = Value::Kind::Object;
      wrapped.line = c.line;
      wrapped.column = c.column;
      wrapped.fields = {{"terms", c}, {"degree", dv}};
      forms.push_back(form(c.kind == Value::Kind::Word ? c : wrapped));
      if (forms.back().degree() != k) fail_at(c, "component degree differs from " + std::to_string(k));
    }
    return VVForm(*chart_, static_cast<int>(k), std::move(forms));
  }

  Distribution distribution(const Value& v) const {
    if (v.kind == Value::Kind::Word) return lookup_as<Distribution>(v, "a distribution");
    require_object(v, "a distribution");
    if (const Value* k = v.find("kernel")) {
      if (v.find("generators")) fail_at(v, "give either generators or kernel");
      try {
        return kernel_distribution(form(*k));
      } catch (const Error& e) {
        fail_at(*k, e.what());
      }
    }
    const Value& g = required(v, "generators", v);
    if (g.kind != Value::Kind::List || g.items.empty()) fail_at(g, "expected a list of vector fields");
    std::vector<VectorField> gens;
    for (const Value& x : g.items) gens.push_back(vector(x));
    try {
      return Distribution(*chart_, std::move(gens));
    } catch (const RankDeficient& e) {
      fail_at(g, e.what());
    }
  }

  Flag flag(const Value& v) const {
    const int cap = cap_.value_or(kDefaultCap);
    try {
      if (const Value* dv = v.find("distribution")) {
        if (v.find("frame")) fail_at(v, "give either frame or distribution");
        const Distribution xi = distribution(*dv);
        const XiStar star = xi_star(xi, cap);
        return flag_endo(adapted_frame(xi, cap), xi.rank(), star.dimension);
      }
      const Value& fv = required(v, "frame", v);
      if (fv.kind != Value::Kind::List) fail_at(fv, "expected a list of vector fields");
      std::vector<VectorField> frame;
      for (const Value& x : fv.items) frame.push_back(vector(x));
      const Value& sv = required(v, "s", v);
      const Value& dv = required(v, "d", v);
      const long s = to_integer(sv), d = to_integer(dv);
      if (s < 1 || d < s || d > static_cast<long>(frame.size())) fail_at(sv, "need 1 <= s <= d <= frame size");
      return flag_endo(frame, static_cast<int>(s), static_cast<int>(d));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail_at(v, e.what());
    }
  }

  Family family(const Value& v) const {
    require_object(v, "a family");
    allow_keys(v, {"gamma", "x"});
    std::vector<std::string> ext = chart_->names();
    if (std::find(ext.begin(), ext.end(), "t") != ext.end()) fail_at(v, "families need a chart without coordinate 't'");
    ext.push_back("t");
    Family f;
    const Value& g = required(v, "gamma", v);
    if (g.kind != Value::Kind::List) fail_at(g, "expected a list of terms");
    for (const Value& t : g.items) {
      require_object(t, "a form term");
      allow_keys(t, {"idx", "coef"});
      std::vector<int> idx = indices(required(t, "idx", t));
      if (idx.size() != 1) fail_at(t, "family terms must have degree 1");
      const Value& c = required(t, "coef", t);
      if (c.kind != Value::Kind::String && c.kind != Value::Kind::Number) fail_at(c, "expected a scalar string");
      parse_scalar_at(c, ext);
      f.gamma_terms.emplace_back(std::move(idx), c.text);
    }
    const Value& x = required(v, "x", v);
    if (x.kind != Value::Kind::List || static_cast<int>(x.items.size()) != chart_->dim())
      fail_at(x, "expected " + std::to_string(chart_->dim()) + " components");
    for (const Value& c : x.items) {
      if (c.kind != Value::Kind::String && c.kind != Value::Kind::Number) fail_at(c, "expected a scalar string");
      parse_scalar_at(c, ext);
      f.x_components.push_back(c.text);
    }
    return f;
  }

  enum class PT { Int, ScalarT, Vector, Form, VVFormT, Endo, Dist, Couple, FlagT, Hyper, FamilyT };

  Param param(PT t, const Value& v) const {
    switch (t) {
      case PT::Int: return to_integer(v);
      case PT::ScalarT: return scalar(v);
      case PT::Vector: return vector(v);
      case PT::Form: return form(v);
      case PT::VVFormT: return vvform(v);
      case PT::Endo: {
        VVForm phi = vvform(v);
        if (phi.degree() != 1) fail_at(v, "expected an endomorphism (degree 1)");
        return phi;
      }
      case PT::Dist: return distribution(v);
      case PT::Couple: return lookup_as<DefiningCouple>(v, "a couple");
      case PT::FlagT: return lookup_as<Flag>(v, "a flag");
      case PT::Hyper: return lookup_as<Hypersurface>(v, "a hypersurface");
      case PT::FamilyT: return family(v);
    }
    fail_at(v, "unsupported parameter");
  }

  struct Key {
    const char* name;
    PT type;
    bool required;
  };

  enum class ExpectType { None, Bool, TypeValue, ZeroWord, ScalarValue };

  struct Schema {
    std::vector<Key> keys;
    ExpectType expect;
  };

  static const Schema& schema(const std::string& kind) {
    static const std::map<std::string, Schema> table = {
        {"integrable", {{{"distribution", PT::Dist, true}}, ExpectType::Bool}},
        {"type",
         {{{"endo", PT::Endo, false},
           {"couple", PT::Couple, false},
           {"flag", PT::FlagT, false},
           {"distribution", PT::Dist, false},
           {"complement", PT::Dist, false},
           {"cap", PT::Int, false},
           {"at_most", PT::Int, false}},
          ExpectType::TypeValue}},
        {"mc_residual", {{{"endo", PT::Endo, true}, {"i_part", PT::VVFormT, false}}, ExpectType::ZeroWord}},
        {"fn_bracket", {{{"left", PT::VVFormT, true}, {"right", PT::VVFormT, true}}, ExpectType::ZeroWord}},
        {"frobenius", {{{"couple", PT::Couple, true}}, ExpectType::Bool}},
        {"levi_flat", {{{"hypersurface", PT::Hyper, true}, {"samples", PT::Int, false}}, ExpectType::Bool}},
        {"deformation_residual",
         {{{"hypersurface", PT::Hyper, true},
           {"p", PT::ScalarT, true},
           {"v", PT::Vector, true},
           {"w", PT::Vector, true}},
          ExpectType::ScalarValue}},
        {"gamma_series", {{{"endo", PT::Endo, true}, {"k", PT::Int, false}}, ExpectType::None}},
        {"delta_alfa",
         {{{"couple", PT::Couple, false},
           {"alpha", PT::Form, false},
           {"y", PT::Vector, false},
           {"family", PT::FamilyT, false}},
          ExpectType::ZeroWord}},
    };
    return table.at(kind);
  }

  Expect expectation(ExpectType t, const Value& v) const {
    Expect e;
    e.text = v.text;
    switch (t) {
      case ExpectType::None: fail_at(v, "this check takes no expect");
      case ExpectType::Bool:
        e.kind = Expect::Kind::Bool;
        e.flag = to_bool(v);
        break;
      case ExpectType::TypeValue:
        if (v.kind == Value::Kind::Number) {
          e.kind = Expect::Kind::Integer;
          e.integer = to_integer(v);
          if (e.integer < 0) fail_at(v, "type is non-negative");
        } else if (v.kind == Value::Kind::Word && (v.text == "infinite" || v.text == "exceeds_cap")) {
          e.kind = Expect::Kind::Word;
          e.word = v.text;
        } else {
          fail_at(v, "expected an integer, infinite or exceeds_cap");
        }
        break;
      case ExpectType::ZeroWord:
        if (v.kind != Value::Kind::Word || (v.text != "zero" && v.text != "nonzero"))
          fail_at(v, "expected zero or nonzero");
        e.kind = Expect::Kind::Word;
        e.word = v.text;
        break;
      case ExpectType::ScalarValue:
        e.kind = Expect::Kind::Scalar;
        e.scalar = scalar(v);
        if (v.kind == Value::Kind::Word) e.text = e.scalar->to_string(chart_->names());
        break;
    }
    return e;
  }

  void check(const Block& b) {
    const auto& kinds = check_kinds();
    if (b.name.empty()) throw ParseError("check needs a kind", b.line, b.column);
    if (std::find(kinds.begin(), kinds.end(), b.name) == kinds.end())
      throw ParseError("unknown check '" + b.name + "'", b.line, b.column);
    const Schema& sc = schema(b.name);
    CheckSpec spec;
    spec.kind = b.name;
    spec.line = b.line;
    spec.name = b.name + "#" + std::to_string(checks_.size() + 1);
    for (const auto& [key, v] : b.body.fields) {
      if (key == "name") {
        spec.name = to_word(v);
        continue;
      }
      if (key == "expect") {
        spec.expect = expectation(sc.expect, v);
        continue;
      }
      const auto it = std::find_if(sc.keys.begin(), sc.keys.end(), [&](const Key& k) { return key == k.name; });
      if (it == sc.keys.end()) fail_at(v, "unknown key '" + key + "' for " + b.name);
      try {
        spec.params.emplace(key, param(it->type, v));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        fail_at(v, e.what());
      }
    }
    for (const Key& k : sc.keys)
      if (k.required && !spec.has(k.name))
        throw ParseError(b.name + " needs '" + k.name + "'", b.line, b.column);
    validate(spec, b);
    for (const auto& c : checks_)
      if (c.name == spec.name) throw ParseError("duplicate check name '" + spec.name + "'", b.line, b.column);
    checks_.push_back(std::move(spec));
  }

  void validate(const CheckSpec& s, const Block& b) const {
    auto fail = [&](const std::string& what) { throw ParseError(what, b.line, b.column); };
    if (s.kind == "type") {
      const int sources = s.has("endo") + s.has("couple") + s.has("flag") + s.has("distribution");
      if (sources != 1) fail("type needs exactly one of endo, couple, flag, distribution");
      if (s.has("distribution") != s.has("complement")) fail("distribution and complement go together");
      if (s.has("cap") && (s.get<long>("cap") < 1 || s.get<long>("cap") > 1000)) fail("cap must be in [1, 1000]");
    } else if (s.kind == "mc_residual") {
      if (s.has("i_part") && s.get<VVForm>("i_part").degree() != 2) fail("i_part must have degree 2");
    } else if (s.kind == "levi_flat") {
      if (s.has("samples") && (s.get<long>("samples") < 1 || s.get<long>("samples") > 200))
        fail("samples must be in [1, 200]");
    } else if (s.kind == "gamma_series") {
      if (s.has("k") && (s.get<long>("k") < 1 || s.get<long>("k") > 8)) fail("k must be in [1, 8]");
    } else if (s.kind == "delta_alfa") {
      if (s.has("family")) {
        if (s.has("couple") || s.has("alpha") || s.has("y")) fail("family excludes couple, alpha and y");
      } else if (!s.has("couple") || !s.has("alpha")) {
        fail("delta_alfa needs couple and alpha, or a family");
      } else if (s.get<KForm>("alpha").degree() != 1) {
        fail("alpha must be a 1-form");
      }
    }
  }

  std::optional<Chart> chart_;
  std::optional<ComplexChart> complex_;
  std::optional<std::uint64_t> seed_;
  std::optional<int> cap_;
  std::map<std::string, Param> objects_;
  std::vector<std::string> order_;
  std::vector<CheckSpec> checks_;
};

}  // namespace

Document parse_document(std::string_view text) { return DocParser(text).parse(); }

const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> kinds = {"integrable",   "type",     "mc_residual",
                                                 "fn_bracket",   "frobenius", "levi_flat",
                                                 "deformation_residual", "gamma_series", "delta_alfa"};
  return kinds;
}

Scenario parse_scenario(std::string_view text) { return Resolver().run(parse_document(text)); }

}  // namespace fncalc
