#pragma once

// Line-oriented job files.
//
//   # comment
//   id: tilted
//   tags: worked, slice
//   doc: free text, kept verbatim
//   ring.coeff: t                   (optional, before ring.main)
//   ring.main: X, Y
//   base: full                      (or a list of polynomials in the coefficient variables)
//   algebra: full                   (or a list of polynomials)
//   measure: count                  (or weighted)
//   derivation D: X -> t, Y -> 1 - t*X
//   retraction phi: W; U1 -> U1 + U2^2, U2 -> 0
//   witnesses C: V | 0, X^2*U0 | 2  (numerator over (coeff; V, U0) | power of t)
//   task t1 find_slice: derivation = D; bound = 8; as = s
//   expect t1: verdict = slice; values = Y + 1/2*X^2; provenance = DERIVED: apply oracle
//   family: triangular-fpf; count = 100; seed = 1
//   output: report.jsonl

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lndkit/derivation.hpp"
#include "lndkit/errors.hpp"
#include "lndkit/parse.hpp"
#include "lndkit/slice.hpp"
#include "lndkit/subalgebra.hpp"

namespace lndkit::harness {

enum class ParamKind {
  poly,            // polynomial in the ring
  poly_or_slice,   // polynomial, or $name of an earlier find_slice result
  poly_list,       // comma separated polynomials
  integer,         // non-negative integer
  derivation,      // declared derivation or an earlier task's "as" output
  retraction,      // declared retraction
  witnesses,       // declared coordinate witnesses
  name,            // fresh identifier
  assignments,     // var -> rational, ...
  pairs,           // a | u, ...   or "auto"
};

struct ParamSpec {
  std::string_view key;
  ParamKind kind;
  bool required;
};

struct OpSpec {
  std::string_view name;
  std::vector<ParamSpec> params;
  /// Kind of value bound by "as", if the op produces one.
  std::optional<ParamKind> produces;
};

inline const std::vector<OpSpec>& op_table() {
  using K = ParamKind;
  static const std::vector<OpSpec> ops = {
      {"apply", {{"derivation", K::derivation, true}, {"element", K::poly_or_slice, true}}, {}},
      {"nilpotency", {{"derivation", K::derivation, true}, {"bound", K::integer, false}}, {}},
      {"triangular", {{"derivation", K::derivation, true}}, {}},
      {"divergence", {{"derivation", K::derivation, true}}, {}},
      {"irreducible", {{"derivation", K::derivation, true}}, {}},
      {"fixed_point_free", {{"derivation", K::derivation, true}}, {}},
      {"find_slice", {{"derivation", K::derivation, true}, {"bound", K::integer, false}, {"as", K::name, false}},
       K::poly_or_slice},
      {"dixmier",
       {{"derivation", K::derivation, true}, {"slice", K::poly_or_slice, true}, {"element", K::poly_or_slice, true}},
       {}},
      {"kernel_generators", {{"derivation", K::derivation, true}, {"slice", K::poly_or_slice, true}}, {}},
      {"verify_slice_theorem",
       {{"derivation", K::derivation, true}, {"slice", K::poly_or_slice, true}, {"bound", K::integer, false}},
       {}},
      {"member", {{"element", K::poly, true}, {"bound", K::integer, true}}, {}},
      {"restrict", {{"derivation", K::derivation, true}, {"bound", K::integer, true}}, {}},
      {"subalgebra_fpf", {{"derivation", K::derivation, true}, {"bound", K::integer, true}}, {}},
      {"kernel",
       {{"derivation", K::derivation, true}, {"bound", K::integer, true}, {"relative_to", K::poly_list, false}},
       {}},
      {"closure",
       {{"derivation", K::derivation, true},
        {"bound", K::integer, true},
        {"ideal_part", K::poly, false},
        {"degree", K::integer, false}},
       {}},
      {"lnd_from_retraction", {{"retraction", K::retraction, true}, {"bound", K::integer, false}, {"as", K::name, false}},
       K::derivation},
      {"complementary_lnd",
       {{"v", K::poly, true},
        {"u0", K::poly, true},
        {"t", K::poly, true},
        {"witnesses", K::witnesses, true},
        {"alpha_cap", K::integer, true},
        {"bound", K::integer, true},
        {"as", K::name, false}},
       K::derivation},
      {"transcendence",
       {{"derivation", K::derivation, true}, {"element", K::poly_or_slice, true}, {"bound", K::integer, true}},
       {}},
      {"proportionality",
       {{"derivation1", K::derivation, true}, {"derivation", K::derivation, true}, {"witness", K::pairs, false}},
       {}},
      {"fiber",
       {{"point", K::assignments, true}, {"coordinates", K::poly_list, true}, {"bound", K::integer, true}},
       {}},
      {"coordinate_system", {{"coordinates", K::poly_list, true}, {"bound", K::integer, true}}, {}},
  };
  return ops;
}

inline const OpSpec* find_op(std::string_view name) {
  for (const auto& op : op_table())
    if (op.name == name) return &op;
  return nullptr;
}

struct Task {
  std::string id;
  std::string op;
  std::vector<std::pair<std::string, std::string>> params;  // canonical text, declaration order of the op

  const std::string* get(std::string_view key) const {
    for (const auto& [k, v] : params)
      if (k == key) return &v;
    return nullptr;
  }
};

struct Expectation {
  std::string verdict;
  std::vector<std::string> values;  // canonical polynomial text
  std::string provenance;
};

struct RetractionDecl {
  std::string w;
  std::vector<std::pair<std::string, Polynomial>> images;
};

struct FamilySpec {
  std::string kind;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

inline const std::set<std::string>& family_kinds() {
  static const std::set<std::string> k{"triangular-fpf", "triangular-nonfpf", "a1-proportional"};
  return k;
}

struct JobSpec {
  std::string id;
  std::vector<std::string> tags;
  std::vector<std::string> doc;
  std::optional<FamilySpec> family;
  VarContext ctx;
  bool has_ring = false;
  std::optional<std::vector<Polynomial>> base;     // nullopt: full
  std::optional<std::vector<Polynomial>> algebra;  // nullopt: full
  DegreeMeasure measure = DegreeMeasure::count;
  std::vector<std::pair<std::string, Derivation>> derivations;
  std::vector<std::pair<std::string, RetractionDecl>> retractions;
  std::vector<std::pair<std::string, std::vector<CoordinateWitness>>> witnesses;
  std::vector<Task> tasks;
  std::vector<std::pair<std::string, Expectation>> expectations;
  std::optional<std::string> output;

  Subalgebra subalgebra() const {
    if (!base && !algebra) return Subalgebra::full(ctx, measure);
    std::vector<Polynomial> b, a;
    if (base) {
      b = *base;
    } else {
      for (const auto& c : ctx.coeff_vars()) b.push_back(Polynomial::variable(ctx, c));
    }
    if (algebra) {
      a = *algebra;
    } else {
      for (const auto& m : ctx.main_vars()) a.push_back(Polynomial::variable(ctx, m));
    }
    return Subalgebra(ctx, std::move(b), std::move(a), measure);
  }

  const Derivation* derivation(std::string_view name) const {
    for (const auto& [n, d] : derivations)
      if (n == name) return &d;
    return nullptr;
  }

  const Expectation* expectation(std::string_view task) const {
    for (const auto& [n, e] : expectations)
      if (n == task) return &e;
    return nullptr;
  }
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

/// A slice of one source line with its 1-based column.
struct Span {
  std::string_view text;
  std::size_t column = 1;

  Span trimmed() const {
    std::size_t b = 0, e = text.size();
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    return {text.substr(b, e - b), column + b};
  }

  std::vector<Span> split(char sep) const {
    std::vector<Span> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == sep) {
        out.push_back(Span{text.substr(start, i - start), column + start}.trimmed());
        start = i + 1;
      }
    }
    return out;
  }

  /// Splits at the first occurrence of sep.
  std::optional<std::pair<Span, Span>> cut(std::string_view sep) const {
    auto pos = text.find(sep);
    if (pos == std::string_view::npos) return std::nullopt;
    return std::pair{Span{text.substr(0, pos), column}.trimmed(),
                     Span{text.substr(pos + sep.size()), column + pos + sep.size()}.trimmed()};
  }
};

inline bool valid_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

class JobParser {
 public:
  explicit JobParser(std::string_view document) : doc_(document) {}

  JobSpec parse() {
    std::size_t pos = 0;
    while (pos <= doc_.size()) {
      auto nl = doc_.find('\n', pos);
      if (nl == std::string_view::npos) nl = doc_.size();
      ++line_;
      line_text(Span{doc_.substr(pos, nl - pos), 1});
      pos = nl + 1;
    }
    finish();
    return std::move(job_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t col) const { throw ParseError(msg, line_, col); }
  [[noreturn]] void fail(const std::string& msg, const Span& at) const { fail(msg, at.column); }

  void line_text(Span raw) {
    auto hash = raw.text.find('#');
    if (hash != std::string_view::npos) raw.text = raw.text.substr(0, hash);
    Span s = raw.trimmed();
    if (s.text.empty()) return;
    auto kv = s.cut(":");
    if (!kv) fail("expected 'key: value'", s);
    auto [key, value] = *kv;
    auto words = key.split(' ');
    words.erase(std::remove_if(words.begin(), words.end(), [](const Span& w) { return w.text.empty(); }), words.end());
    if (words.empty()) fail("missing key", key);
    std::string_view head = words[0].text;

    if (head == "id" && words.size() == 1) {
      if (!valid_ident(value.text)) fail("invalid id", value);
      job_.id = value.text;
    } else if (head == "tags" && words.size() == 1) {
      for (auto& t : value.split(','))
        if (!t.text.empty()) job_.tags.emplace_back(t.text);
    } else if (head == "doc" && words.size() == 1) {
      job_.doc.emplace_back(value.text);
    } else if (head == "family" && words.size() == 1) {
      family(value);
    } else if (head == "output" && words.size() == 1) {
      job_.output = std::string(value.text);
    } else if (head == "ring.coeff" && words.size() == 1) {
      if (coeff_) fail("duplicate ring.coeff", key);
      if (main_) fail("ring.coeff must precede ring.main", key);
      coeff_ = names(value);
    } else if (head == "ring.main" && words.size() == 1) {
      if (main_) fail("duplicate ring.main", key);
      main_ = names(value);
      make_ring(value);
    } else if (head == "base" && words.size() == 1) {
      need_ring(key);
      job_.base = generator_block(value);
    } else if (head == "algebra" && words.size() == 1) {
      need_ring(key);
      job_.algebra = generator_block(value);
    } else if (head == "measure" && words.size() == 1) {
      if (value.text == "count")
        job_.measure = DegreeMeasure::count;
      else if (value.text == "weighted")
        job_.measure = DegreeMeasure::weighted;
      else
        fail("measure must be count or weighted", value);
    } else if (head == "derivation" && words.size() == 2) {
      need_ring(key);
      derivation(words[1], value);
    } else if (head == "retraction" && words.size() == 2) {
      need_ring(key);
      retraction(words[1], value);
    } else if (head == "witnesses" && words.size() == 2) {
      need_ring(key);
      witnesses(words[1], value);
    } else if (head == "task" && words.size() == 3) {
      need_ring(key);
      task(words[1], words[2], value);
    } else if (head == "expect" && words.size() == 2) {
      expect(words[1], value);
    } else {
      fail("unknown key '" + std::string(key.text) + "'", key);
    }
  }

  std::vector<std::string> names(const Span& value) {
    std::vector<std::string> out;
    if (value.text.empty()) return out;
    for (auto& n : value.split(',')) {
      if (!VarContext::valid_name(n.text)) fail("invalid variable name '" + std::string(n.text) + "'", n);
      out.emplace_back(n.text);
    }
    return out;
  }

  void make_ring(const Span& at) {
    try {
      job_.ctx = VarContext::make(coeff_.value_or(std::vector<std::string>{}), *main_);
    } catch (const std::exception& e) {
      fail(e.what(), at);
    }
    job_.has_ring = true;
  }

  void need_ring(const Span& at) {
    if (!job_.has_ring) fail("ring.main must come first", at);
  }

  Polynomial poly(const Span& s, const VarContext& ctx) {
    if (s.text.empty()) fail("expected a polynomial", s);
    return parse_polynomial(s.text, ctx, line_, s.column);
  }
  Polynomial poly(const Span& s) { return poly(s, job_.ctx); }

  std::vector<Polynomial> poly_list(const Span& s) {
    std::vector<Polynomial> out;
    for (auto& p : s.split(',')) out.push_back(poly(p));
    return out;
  }

  std::optional<std::vector<Polynomial>> generator_block(const Span& value) {
    if (value.text == "full") return std::nullopt;
    if (value.text.empty()) return std::vector<Polynomial>{};
    return poly_list(value);
  }

  std::uint64_t integer(const Span& s) {
    if (s.text.empty() || s.text.size() > 18 ||
        !std::all_of(s.text.begin(), s.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail("expected a non-negative integer", s);
    return std::stoull(std::string(s.text));
  }

  std::string fresh_name(const Span& s) {
    if (!valid_ident(s.text)) fail("invalid name '" + std::string(s.text) + "'", s);
    std::string n(s.text);
    if (declared_.contains(n)) fail("name '" + n + "' declared twice", s);
    declared_.insert(n);
    return n;
  }

  void family(const Span& value) {
    auto parts = value.split(';');
    FamilySpec f;
    f.kind = parts[0].text;
    if (!family_kinds().contains(f.kind)) fail("unknown family '" + f.kind + "'", parts[0]);
    bool count = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto kv = parts[i].cut("=");
      if (!kv) fail("expected key = value", parts[i]);
      if (kv->first.text == "count") {
        f.count = integer(kv->second);
        count = true;
      } else if (kv->first.text == "seed") {
        f.seed = integer(kv->second);
      } else {
        fail("unknown family parameter '" + std::string(kv->first.text) + "'", kv->first);
      }
    }
    if (!count || f.count == 0) fail("family needs a positive count", value);
    job_.family = f;
  }

  void derivation(const Span& name, const Span& value) {
    std::string n = fresh_name(name);
    std::map<std::string, Polynomial> images;
    for (auto& item : value.split(',')) {
      auto kv = item.cut("->");
      if (!kv) fail("expected 'variable -> image'", item);
      auto idx = job_.ctx.index_of(kv->first.text);
      if (!idx) fail("unknown variable " + std::string(kv->first.text), kv->first);
      if (!job_.ctx.is_main(*idx)) fail("image given for coefficient variable " + std::string(kv->first.text), kv->first);
      if (images.contains(std::string(kv->first.text))) fail("duplicate image", kv->first);
      images.emplace(std::string(kv->first.text), poly(kv->second));
    }
    try {
      job_.derivations.emplace_back(n, Derivation::from_map(job_.ctx, images));
    } catch (const StructuralError& e) {
      fail(e.what(), value);
    }
    derivations_.insert(n);
  }

  void retraction(const Span& name, const Span& value) {
    std::string n = fresh_name(name);
    auto cut = value.cut(";");
    if (!cut) fail("expected 'W; U -> image, ...'", value);
    RetractionDecl r;
    auto w = job_.ctx.index_of(cut->first.text);
    if (!w || !job_.ctx.is_main(*w)) fail("retraction variable must be a main variable", cut->first);
    r.w = cut->first.text;
    for (auto& item : cut->second.split(',')) {
      auto kv = item.cut("->");
      if (!kv) fail("expected 'U -> image'", item);
      auto u = job_.ctx.index_of(kv->first.text);
      if (!u) fail("unknown variable " + std::string(kv->first.text), kv->first);
      r.images.emplace_back(std::string(kv->first.text), poly(kv->second));
    }
    job_.retractions.emplace_back(n, std::move(r));
    retractions_.insert(n);
  }

  void witnesses(const Span& name, const Span& value) {
    std::string n = fresh_name(name);
    VarContext coord;
    try {
      coord = coordinate_context(job_.ctx);
    } catch (const std::exception& e) {
      fail(e.what(), name);
    }
    std::vector<CoordinateWitness> ws;
    for (auto& item : value.split(',')) {
      auto kv = item.cut("|");
      if (!kv) fail("expected 'numerator | power'", item);
      ws.push_back({poly(kv->first, coord), static_cast<std::uint32_t>(integer(kv->second))});
    }
    job_.witnesses.emplace_back(n, std::move(ws));
    witness_sets_.insert(n);
  }

  std::string param_value(ParamKind kind, const Span& v) {
    switch (kind) {
      case ParamKind::poly:
        return poly(v).to_string();
      case ParamKind::poly_or_slice:
        if (!v.text.empty() && v.text[0] == '$') {
          std::string ref(v.text.substr(1));
          if (!slices_.contains(ref)) fail("dangling reference $" + ref, v);
          return "$" + ref;
        }
        return poly(v).to_string();
      case ParamKind::poly_list: {
        std::vector<std::string> parts;
        for (const auto& p : poly_list(v)) parts.push_back(p.to_string());
        return join(parts, ", ");
      }
      case ParamKind::integer: {
        auto x = integer(v);
        if (x == 0) fail("bound must be positive", v);
        return std::to_string(x);
      }
      case ParamKind::derivation:
        if (!derivations_.contains(std::string(v.text))) fail("dangling reference " + std::string(v.text), v);
        return std::string(v.text);
      case ParamKind::retraction:
        if (!retractions_.contains(std::string(v.text))) fail("dangling reference " + std::string(v.text), v);
        return std::string(v.text);
      case ParamKind::witnesses:
        if (!witness_sets_.contains(std::string(v.text))) fail("dangling reference " + std::string(v.text), v);
        return std::string(v.text);
      case ParamKind::name:
        return fresh_name(v);
      case ParamKind::assignments: {
        std::vector<std::string> parts;
        for (auto& item : v.split(',')) {
          auto kv = item.cut("->");
          if (!kv) fail("expected 'variable -> value'", item);
          auto idx = job_.ctx.index_of(kv->first.text);
          if (!idx) fail("unknown variable " + std::string(kv->first.text), kv->first);
          if (job_.ctx.is_main(*idx)) fail("points assign coefficient variables only", kv->first);
          Polynomial c = poly(kv->second);
          if (!c.is_constant()) fail("point coordinates must be rational constants", kv->second);
          parts.push_back(std::string(kv->first.text) + " -> " + c.to_string());
        }
        return join(parts, ", ");
      }
      case ParamKind::pairs: {
        if (v.text == "auto") return "auto";
        std::vector<std::string> parts;
        for (auto& item : v.split(',')) {
          auto kv = item.cut("|");
          if (!kv) fail("expected 'a | u'", item);
          parts.push_back(poly(kv->first).to_string() + " | " + poly(kv->second).to_string());
        }
        return join(parts, ", ");
      }
    }
    fail("unreachable", v);
  }

  void task(const Span& id, const Span& op_name, const Span& value) {
    if (!valid_ident(id.text)) fail("invalid task id", id);
    std::string tid(id.text);
    for (const auto& t : job_.tasks)
      if (t.id == tid) fail("duplicate task id " + tid, id);
    const OpSpec* op = find_op(op_name.text);
    if (!op) fail("unknown operation '" + std::string(op_name.text) + "'", op_name);
    std::map<std::string, Span> given;
    if (!value.text.empty()) {
      for (auto& item : value.split(';')) {
        auto kv = item.cut("=");
        if (!kv) fail("expected 'key = value'", item);
        std::string k(kv->first.text);
        auto known = std::find_if(op->params.begin(), op->params.end(), [&](const ParamSpec& p) { return p.key == k; });
        if (known == op->params.end()) fail("unknown parameter '" + k + "' for " + std::string(op->name), kv->first);
        if (given.contains(k)) fail("duplicate parameter '" + k + "'", kv->first);
        given.emplace(k, kv->second);
      }
    }
    Task t{tid, std::string(op->name), {}};
    std::optional<std::string> produced;
    for (const auto& p : op->params) {
      auto it = given.find(std::string(p.key));
      if (it == given.end()) {
        if (p.required) fail("missing parameter '" + std::string(p.key) + "' for " + std::string(op->name), op_name);
        continue;
      }
      std::string v = param_value(p.kind, it->second);
      if (p.kind == ParamKind::name) produced = v;
      t.params.emplace_back(std::string(p.key), std::move(v));
    }
    if (produced) {
      if (op->produces == ParamKind::derivation) derivations_.insert(*produced);
      if (op->produces == ParamKind::poly_or_slice) slices_.insert(*produced);
    }
    job_.tasks.push_back(std::move(t));
  }

  void expect(const Span& id, const Span& value) {
    std::string tid(id.text);
    if (job_.expectation(tid)) fail("duplicate expectation for " + tid, id);
    Expectation e;
    for (auto& item : value.split(';')) {
      auto kv = item.cut("=");
      if (!kv) fail("expected 'key = value'", item);
      if (kv->first.text == "verdict") {
        e.verdict = kv->second.text;
      } else if (kv->first.text == "values") {
        need_ring(kv->first);
        if (!kv->second.text.empty())
          for (const auto& p : poly_list(kv->second)) e.values.push_back(p.to_string());
      } else if (kv->first.text == "provenance") {
        e.provenance = kv->second.text;
        static const std::vector<std::string_view> tags{"PAPER", "TRIVIAL", "DERIVED"};
        if (std::none_of(tags.begin(), tags.end(), [&](auto t) { return e.provenance.starts_with(t); }))
          fail("provenance must start with PAPER, TRIVIAL or DERIVED", kv->second);
      } else {
        fail("unknown expectation key '" + std::string(kv->first.text) + "'", kv->first);
      }
    }
    if (e.verdict.empty()) fail("expectation without verdict", value);
    if (e.provenance.empty()) fail("expectation without provenance", value);
    job_.expectations.emplace_back(tid, std::move(e));
    expect_at_.emplace(tid, std::make_pair(line_, id.column));
  }

  void finish() {
    if (job_.id.empty()) throw ParseError("job has no id", 1, 1);
    if (!job_.family && !job_.has_ring && !job_.tasks.empty()) throw ParseError("job has tasks but no ring", 1, 1);
    for (const auto& [tid, e] : job_.expectations)
      if (std::none_of(job_.tasks.begin(), job_.tasks.end(), [&](const Task& t) { return t.id == tid; }))
        throw ParseError("expectation for unknown task " + tid, expect_at_.at(tid).first, expect_at_.at(tid).second);
    if (job_.has_ring) {
      try {
        (void)job_.subalgebra();
      } catch (const StructuralError& e) {
        throw ParseError(e.what(), 1, 1);
      }
    }
  }

  std::string_view doc_;
  std::size_t line_ = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> expect_at_;
  JobSpec job_;
  std::optional<std::vector<std::string>> coeff_, main_;
  std::set<std::string> declared_, derivations_, retractions_, witness_sets_, slices_;
};

}  // namespace detail

inline JobSpec parse_job(std::string_view document) { return detail::JobParser(document).parse(); }

inline std::string serialize_job(const JobSpec& j) {
  std::ostringstream o;
  auto polys = [](const std::vector<Polynomial>& ps) {
    std::vector<std::string> s;
    for (const auto& p : ps) s.push_back(p.to_string());
    return detail::join(s, ", ");
  };
  o << "id: " << j.id << "\n";
  if (!j.tags.empty()) o << "tags: " << detail::join(j.tags, ", ") << "\n";
  for (const auto& d : j.doc) o << "doc: " << d << "\n";
  if (j.family) o << "family: " << j.family->kind << "; count = " << j.family->count << "; seed = " << j.family->seed << "\n";
  if (j.has_ring) {
    if (j.ctx.num_coeff()) o << "ring.coeff: " << detail::join(j.ctx.coeff_vars(), ", ") << "\n";
    o << "ring.main: " << detail::join(j.ctx.main_vars(), ", ") << "\n";
    o << "base: " << (j.base ? polys(*j.base) : "full") << "\n";
    o << "algebra: " << (j.algebra ? polys(*j.algebra) : "full") << "\n";
    o << "measure: " << to_string(j.measure) << "\n";
  }
  for (const auto& [n, d] : j.derivations) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < d.images().size(); ++i)
      parts.push_back(j.ctx.name(i) + " -> " + d.images()[i].to_string());
    o << "derivation " << n << ": " << detail::join(parts, ", ") << "\n";
  }
  for (const auto& [n, r] : j.retractions) {
    std::vector<std::string> parts;
    for (const auto& [u, img] : r.images) parts.push_back(u + " -> " + img.to_string());
    o << "retraction " << n << ": " << r.w << "; " << detail::join(parts, ", ") << "\n";
  }
  for (const auto& [n, ws] : j.witnesses) {
    std::vector<std::string> parts;
    for (const auto& w : ws) parts.push_back(w.numerator.to_string() + " | " + std::to_string(w.t_power));
    o << "witnesses " << n << ": " << detail::join(parts, ", ") << "\n";
  }
  for (const auto& t : j.tasks) {
    std::vector<std::string> parts;
    for (const auto& [k, v] : t.params) parts.push_back(k + " = " + v);
    o << "task " << t.id << " " << t.op << ": " << detail::join(parts, "; ") << "\n";
  }
  for (const auto& [id, e] : j.expectations) {
    o << "expect " << id << ": verdict = " << e.verdict;
    if (!e.values.empty()) o << "; values = " << detail::join(e.values, ", ");
    o << "; provenance = " << e.provenance << "\n";
  }
  if (j.output) o << "output: " << *j.output << "\n";
  return o.str();
}

}  // namespace lndkit::harness
