#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lndkit/derivation.hpp"
#include "lndkit/harness/fiber.hpp"
#include "lndkit/harness/job.hpp"
#include "lndkit/harness/random.hpp"
#include "lndkit/slice.hpp"
#include "lndkit/subalgebra.hpp"

namespace lndkit::harness {

using json = nlohmann::json;

struct RunOptions {
  std::size_t nilpotency_bound = kDefaultNilpotencyBound;
  std::optional<std::uint64_t> seed;  // overrides family seeds
};

/// JSON Lines: one "job" record, one "task" record per task, one "summary".
struct Report {
  std::vector<json> records;
  std::size_t tasks = 0;
  std::size_t mismatches = 0;
  std::size_t errors = 0;

  bool passed() const noexcept { return mismatches == 0 && errors == 0; }

  void append(const Report& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
    tasks += other.tasks;
    mismatches += other.mismatches;
    errors += other.errors;
  }

  std::string to_jsonl(bool with_timing = true) const {
    std::string out;
    for (auto r : records) {
      if (!with_timing) r.erase("elapsed_ms");
      out += r.dump();
      out += '\n';
    }
    return out;
  }
};

namespace detail {

inline json poly_list_json(const std::vector<Polynomial>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

/// Formal symbol -> generator, so witnesses can be re-evaluated externally.
/// Over the full ring the expression is already in the ring variables.
inline json symbols_json(const Subalgebra& s) {
  json o = json::object();
  if (s.full_ring()) {
    for (std::size_t i = 0; i < s.context().size(); ++i) o[s.context().name(i)] = s.context().name(i);
    return o;
  }
  for (std::size_t i = 0; i < s.formal_context().size(); ++i)
    o[s.formal_context().name(i)] = s.symbol_value(i).to_string();
  return o;
}

inline json membership_json(const Subalgebra& s, const MembershipWitness& w) {
  return {{"target", w.target.to_string()}, {"expression", w.expression.to_string()}, {"symbols", symbols_json(s)}};
}

struct DerivValue {
  AnyDerivation op;
  std::optional<Derivation> ambient;
  std::vector<Polynomial> images;  // per algebra generator of the job's subalgebra
};

class JobRunner {
 public:
  JobRunner(const JobSpec& job, const RunOptions& opts)
      : job_(job), opts_(opts), s_(std::make_shared<Subalgebra>(job.subalgebra())) {
    for (const auto& [name, d] : job_.derivations)
      derivs_.emplace(name, DerivValue{AnyDerivation(d), d, generator_images(d, *s_)});
  }

  Report run() {
    Report rep;
    rep.records.push_back(header());
    for (const auto& t : job_.tasks) {
      json rec = run_task(t);
      const Expectation* e = job_.expectation(t.id);
      std::string status;
      if (e) {
        rec["expected"] = {{"verdict", e->verdict}, {"values", e->values}, {"provenance", e->provenance}};
        bool ok = rec["verdict"] == e->verdict;
        if (ok && !e->values.empty()) ok = rec["values"] == json(e->values);
        status = ok ? "pass" : "mismatch";
      } else {
        status = rec.contains("error") ? "error" : "unchecked";
      }
      rec["status"] = status;
      rep.mismatches += status == "mismatch";
      rep.errors += status == "error";
      ++rep.tasks;
      rep.records.push_back(std::move(rec));
    }
    rep.records.push_back(json{{"record", "summary"},
                               {"job", job_.id},
                               {"tasks", rep.tasks},
                               {"mismatches", rep.mismatches},
                               {"errors", rep.errors},
                               {"passed", rep.passed()}});
    return rep;
  }

 private:
  json header() const {
    json h{{"record", "job"}, {"job", job_.id}, {"tags", job_.tags}, {"doc", job_.doc}};
    if (job_.has_ring) {
      h["ring"] = {{"coeff", job_.ctx.coeff_vars()}, {"main", job_.ctx.main_vars()}};
      h["base"] = poly_list_json(s_->base_generators());
      h["algebra"] = poly_list_json(s_->algebra_generators());
      h["measure"] = to_string(s_->measure());
    }
    return h;
  }

  json run_task(const Task& t) {
    json rec{{"record", "task"}, {"job", job_.id}, {"task", t.id}, {"op", t.op}};
    json params = json::object();
    for (const auto& [k, v] : t.params) params[k] = v;
    rec["params"] = params;
    rec["values"] = json::array();
    rec["witnesses"] = json::object();
    auto start = std::chrono::steady_clock::now();
    try {
      dispatch(t, rec);
    } catch (const DomainError& e) {
      fail(rec, "domain_error", e.what());
    } catch (const PreconditionError& e) {
      fail(rec, "precondition_error", e.what());
    } catch (const StructuralError& e) {
      fail(rec, "structural_error", e.what());
    } catch (const UnsupportedSizeError& e) {
      fail(rec, "unsupported_size", e.what());
    } catch (const std::exception& e) {
      fail(rec, "error", e.what());
    }
    rec["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
  }

  static void fail(json& rec, const char* kind, const std::string& msg) {
    rec["verdict"] = kind;
    rec["error"] = msg;
  }

  // -- parameter access ---------------------------------------------------

  const std::string& param(const Task& t, std::string_view key) const {
    const std::string* v = t.get(key);
    if (!v) throw PreconditionError("missing parameter " + std::string(key));
    return *v;
  }

  std::optional<std::size_t> opt_int(const Task& t, std::string_view key) const {
    const std::string* v = t.get(key);
    if (!v) return std::nullopt;
    return static_cast<std::size_t>(std::stoull(*v));
  }

  Polynomial poly(const std::string& text) const { return parse_polynomial(text, job_.ctx); }

  Polynomial poly_or_slice(const std::string& text) const {
    if (!text.empty() && text[0] == '$') {
      auto it = slices_.find(text.substr(1));
      if (it == slices_.end()) throw PreconditionError("slice " + text + " is not available");
      return it->second;
    }
    return poly(text);
  }

  std::vector<Polynomial> poly_list(const std::string& text) const {
    std::vector<Polynomial> out;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto comma = text.find(',', start);
      if (comma == std::string::npos) comma = text.size();
      out.push_back(poly(text.substr(start, comma - start)));
      start = comma + 1;
    }
    return out;
  }

  const DerivValue& deriv(const Task& t, std::string_view key = "derivation") const {
    const std::string& name = param(t, key);
    auto it = derivs_.find(name);
    if (it == derivs_.end()) throw PreconditionError("derivation " + name + " is not available");
    return it->second;
  }

  const Derivation& ambient(const DerivValue& d) const {
    if (!d.ambient) throw PreconditionError("operation needs a derivation of the full ambient ring");
    return *d.ambient;
  }

  // -- operations ----------------------------------------------------------

  void dispatch(const Task& t, json& rec) {
    static const std::map<std::string, void (JobRunner::*)(const Task&, json&)> table = {
        {"apply", &JobRunner::op_apply},
        {"nilpotency", &JobRunner::op_nilpotency},
        {"triangular", &JobRunner::op_triangular},
        {"divergence", &JobRunner::op_divergence},
        {"irreducible", &JobRunner::op_irreducible},
        {"fixed_point_free", &JobRunner::op_fpf},
        {"find_slice", &JobRunner::op_find_slice},
        {"dixmier", &JobRunner::op_dixmier},
        {"kernel_generators", &JobRunner::op_kernel_generators},
        {"verify_slice_theorem", &JobRunner::op_verify},
        {"member", &JobRunner::op_member},
        {"restrict", &JobRunner::op_restrict},
        {"subalgebra_fpf", &JobRunner::op_subalgebra_fpf},
        {"kernel", &JobRunner::op_kernel},
        {"closure", &JobRunner::op_closure},
        {"lnd_from_retraction", &JobRunner::op_retraction},
        {"complementary_lnd", &JobRunner::op_complementary},
        {"transcendence", &JobRunner::op_transcendence},
        {"proportionality", &JobRunner::op_proportionality},
        {"fiber", &JobRunner::op_fiber},
        {"coordinate_system", &JobRunner::op_coordinates},
    };
    auto it = table.find(t.op);
    if (it == table.end()) throw PreconditionError("unknown operation " + t.op);
    (this->*(it->second))(t, rec);
  }

  void op_apply(const Task& t, json& rec) {
    rec["verdict"] = "value";
    rec["values"] = {deriv(t).op.apply(poly_or_slice(param(t, "element"))).to_string()};
  }

  void op_nilpotency(const Task& t, json& rec) {
    std::size_t bound = opt_int(t, "bound").value_or(opts_.nilpotency_bound);
    auto v = nilpotency_verdict_on(deriv(t).op, s_->algebra_generators(), bound);
    rec["verdict"] = v.certified() ? "certified_lnd" : "inconclusive";
    rec["bound"] = bound;
    json idx = json::array();
    for (const auto& i : v.indices) idx.push_back(i ? json(*i) : json(nullptr));
    rec["witnesses"]["indices"] = idx;
  }

  void op_triangular(const Task& t, json& rec) {
    const Derivation& d = ambient(deriv(t));
    auto order = is_triangular(d);
    rec["verdict"] = order ? "triangular" : "not_triangular";
    if (order) {
      json names = json::array();
      for (auto i : *order) names.push_back(job_.ctx.name(i));
      rec["witnesses"]["order"] = names;
    }
  }

  void op_divergence(const Task& t, json& rec) {
    rec["verdict"] = "value";
    rec["values"] = {divergence(ambient(deriv(t))).to_string()};
  }

  void op_irreducible(const Task& t, json& rec) {
    auto v = is_irreducible(ambient(deriv(t)));
    rec["verdict"] = v.irreducible ? "irreducible" : "reducible";
    rec["values"] = {v.common_divisor.to_string()};
  }

  void op_fpf(const Task& t, json& rec) {
    const Derivation& d = ambient(deriv(t));
    auto v = is_fixed_point_free(d);
    rec["verdict"] = v.fixed_point_free() ? "yes" : "no";
    if (v.cofactors) {
      rec["values"] = poly_list_json(*v.cofactors);
      rec["witnesses"]["images"] = poly_list_json(d.images());
    }
  }

  void op_find_slice(const Task& t, json& rec) {
    std::size_t bound = opt_int(t, "bound").value_or(8);
    auto r = find_slice(deriv(t).op, *s_, bound);
    rec["bound"] = r.bound;
    rec["verdict"] = r.found() ? "slice" : "none_up_to_bound";
    if (r.found()) {
      rec["values"] = {r.slice->to_string()};
      rec["witnesses"]["membership"] = membership_json(*s_, *r.witness);
      if (const std::string* as = t.get("as")) slices_.emplace(*as, *r.slice);
    }
  }

  void op_dixmier(const Task& t, json& rec) {
    Polynomial s = poly_or_slice(param(t, "slice"));
    rec["verdict"] = "value";
    rec["values"] = {dixmier(deriv(t).op, s, poly_or_slice(param(t, "element")), opts_.nilpotency_bound).to_string()};
  }

  void op_kernel_generators(const Task& t, json& rec) {
    Polynomial s = poly_or_slice(param(t, "slice"));
    rec["verdict"] = "generators";
    rec["values"] = poly_list_json(kernel_generators(deriv(t).op, s, *s_));
  }

  void op_verify(const Task& t, json& rec) {
    const DerivValue& d = deriv(t);
    Polynomial s = poly_or_slice(param(t, "slice"));
    std::optional<std::size_t> fixed = opt_int(t, "bound");
    std::size_t bound;
    if (fixed) {
      bound = *fixed;
    } else {
      // 2 * (max generator degree) * (nilpotency index), searched upwards.
      auto v = nilpotency_verdict_on(d.op, s_->algebra_generators(), opts_.nilpotency_bound);
      std::size_t nu = 1, deg = 1;
      for (const auto& i : v.indices) nu = std::max(nu, i.value_or(opts_.nilpotency_bound));
      for (const auto& g : s_->algebra_generators()) deg = std::max<std::size_t>(deg, g.total_degree().value_or(0));
      bound = 2 * deg * nu;
    }
    SliceTheoremResult r;
    for (std::size_t k = fixed ? bound : 1; k <= bound; ++k) {
      r = verify_slice_theorem(d.op, s, *s_, k);
      if (r.certified()) break;
    }
    rec["bound"] = r.bound;
    if (!r.certified()) {
      rec["verdict"] = "incomplete";
      rec["values"] = poly_list_json(r.missing);
      return;
    }
    const auto& c = *r.certificate;
    rec["verdict"] = "certificate";
    rec["values"] = poly_list_json(c.kernel_generators);
    json re = json::array();
    for (const auto& w : c.reexpression) re.push_back(membership_json(c.kernel_algebra, w));
    rec["witnesses"] = {{"slice", c.slice.to_string()},
                        {"kernel_generators", poly_list_json(c.kernel_generators)},
                        {"reexpression", re}};
  }

  void op_member(const Task& t, json& rec) {
    std::size_t bound = *opt_int(t, "bound");
    auto r = subalgebra_member(poly(param(t, "element")), *s_, bound);
    rec["bound"] = bound;
    rec["verdict"] = r.found() ? "witness" : "not_found_up_to_bound";
    if (r.found()) {
      rec["values"] = {r.witness->expression.to_string()};
      rec["witnesses"]["membership"] = membership_json(*s_, *r.witness);
    }
  }

  void op_restrict(const Task& t, json& rec) {
    std::size_t bound = *opt_int(t, "bound");
    auto r = restrict_derivation(deriv(t).op, *s_, bound);
    rec["bound"] = bound;
    if (r.restricted) {
      rec["verdict"] = "restricted";
      rec["values"] = poly_list_json(r.images);
      json ws = json::array();
      for (const auto& w : r.witnesses) ws.push_back(membership_json(*s_, w));
      rec["witnesses"]["images"] = ws;
    } else {
      rec["verdict"] = "fails_to_restrict";
      rec["values"] = {r.failure->first.to_string(), r.failure->second.to_string()};
    }
  }

  void op_subalgebra_fpf(const Task& t, json& rec) {
    std::size_t bound = *opt_int(t, "bound");
    auto r = subalgebra_fpf(deriv(t).images, *s_, bound);
    rec["bound"] = bound;
    rec["verdict"] = r.found() ? "yes" : "not_found_up_to_bound";
    rec["witnesses"]["origin_obstruction"] = r.origin_obstruction;
    if (r.found()) {
      json cof = json::array();
      for (const auto& c : *r.cofactors) cof.push_back(c.to_string());
      rec["witnesses"]["cofactors"] = cof;
      rec["witnesses"]["symbols"] = symbols_json(*s_);
      rec["witnesses"]["images"] = poly_list_json(deriv(t).images);
    }
  }

  void op_kernel(const Task& t, json& rec) {
    std::size_t bound = *opt_int(t, "bound");
    auto k = kernel_up_to_degree(deriv(t).images, *s_, bound);
    rec["bound"] = bound;
    rec["values"] = poly_list_json(k.elements);
    json ex = json::array();
    for (const auto& e : k.expressions) ex.push_back(e.to_string());
    rec["witnesses"] = {{"expressions", ex}, {"symbols", symbols_json(*s_)}};
    const std::string* rel = t.get("relative_to");
    if (!rel) {
      rec["verdict"] = "basis";
      return;
    }
    // Compare with the span of R[relative_to] at the same bound.
    Subalgebra r(job_.ctx, s_->base_generators(), poly_list(*rel), s_->measure());
    MembershipOracle in_r(r, bound);
    bool within = std::all_of(k.elements.begin(), k.elements.end(), [&](const Polynomial& e) { return in_r.member(e).found(); });
    EchelonSpace<Monomial, LexGreater> kspan;
    for (std::size_t i = 0; i < k.elements.size(); ++i) kspan.insert(to_vec(k.elements[i]), i);
    ProductSpace rspace(r, bound);
    bool covers = std::all_of(rspace.candidates().begin(), rspace.candidates().end(),
                              [&](const auto& c) { return kspan.express(to_vec(c.value)).has_value(); });
    rec["verdict"] = within ? (covers ? "equal" : "within") : "not_within";
  }

  void op_closure(const Task& t, json& rec) {
    std::size_t bound = *opt_int(t, "bound");
    const DerivValue& d = deriv(t);
    MembershipOracle oracle(*s_, bound);
    std::vector<Polynomial> missing;
    std::size_t checked = 0;
    const auto& g = s_->algebra_generators();
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i; j < g.size(); ++j) {
        ++checked;
        Polynomial img = d.op.apply(g[i] * g[j]);
        if (!oracle.member(img).found()) missing.push_back(img);
      }
    if (const std::string* ideal = t.get("ideal_part")) {
      Polynomial f = poly(*ideal);
      std::size_t degree = opt_int(t, "degree").value_or(bound);
      std::uint64_t fd = f.total_degree().value_or(0);
      std::vector<Monomial> monos{Monomial(job_.ctx.size())};
      for (std::size_t k = 0; k < monos.size(); ++k) {
        Monomial m = monos[k];
        if (m.total_degree() + fd > degree) continue;
        ++checked;
        Polynomial e = f * Polynomial::term(job_.ctx, m, Rational(1));
        if (!oracle.member(e).found()) missing.push_back(e);
        // enumerate each monomial once: only raise variables at or after the last raised one
        std::size_t last = 0;
        for (std::size_t v = 0; v < m.size(); ++v)
          if (m[v]) last = v;
        for (std::size_t v = last; v < m.size(); ++v) {
          Monomial n = m;
          n[v] += 1;
          if (n.total_degree() + fd <= degree) monos.push_back(n);
        }
      }
    }
    rec["bound"] = bound;
    rec["verdict"] = missing.empty() ? "pass" : "fail";
    rec["values"] = poly_list_json(missing);
    rec["witnesses"]["checked"] = checked;
  }

  void op_retraction(const Task& t, json& rec) {
    const std::string& name = param(t, "retraction");
    auto it = std::find_if(job_.retractions.begin(), job_.retractions.end(), [&](const auto& r) { return r.first == name; });
    RetractionSpec spec{*s_, it->second.w, {}, opt_int(t, "bound").value_or(6)};
    for (const auto& [u, img] : it->second.images) spec.phi.emplace(u, img);
    auto r = lnd_from_retraction(spec);
    rec["verdict"] = "lnd";
    rec["values"] = poly_list_json(r.images);
    json idx = json::array();
    for (const auto& i : r.nilpotency.indices) idx.push_back(i ? json(*i) : json(nullptr));
    rec["witnesses"]["nilpotency_indices"] = idx;
    if (const std::string* as = t.get("as"))
      derivs_.emplace(*as, DerivValue{AnyDerivation(r.derivation), std::nullopt, r.images});
  }

  void op_complementary(const Task& t, json& rec) {
    const std::string& wname = param(t, "witnesses");
    auto it = std::find_if(job_.witnesses.begin(), job_.witnesses.end(), [&](const auto& w) { return w.first == wname; });
    std::size_t bound = *opt_int(t, "bound");
    Polynomial v = poly(param(t, "v"));
    auto r = complementary_lnd(*s_, v, poly(param(t, "u0")), poly(param(t, "t")), it->second,
                               static_cast<std::uint32_t>(*opt_int(t, "alpha_cap")), bound);
    rec["bound"] = bound;
    json trace = json::array();
    for (const auto& [a, g] : r.trace) trace.push_back({{"alpha", a}, {"generator", g.to_string()}});
    rec["witnesses"]["trace"] = trace;
    if (!r.found()) {
      rec["verdict"] = "fails_up_to_cap";
      return;
    }
    SubalgebraDerivation d(*s_, r.images, bound);
    Polynomial dv = d.apply(v);
    if (!dv.is_zero()) throw DomainError("complementary derivation does not kill V");
    if (!r.nilpotency.certified()) throw DomainError("complementary derivation failed the nilpotency check");
    rec["verdict"] = "lnd";
    rec["values"] = poly_list_json(r.images);
    rec["witnesses"]["alpha"] = *r.alpha;
    rec["witnesses"]["D(V)"] = dv.to_string();
    if (const std::string* as = t.get("as")) derivs_.emplace(*as, DerivValue{AnyDerivation(d), std::nullopt, r.images});
  }

  void op_transcendence(const Task& t, json& rec) {
    std::size_t bound = *opt_int(t, "bound");
    auto r = transcendence_check(deriv(t).op, poly_or_slice(param(t, "element")), *s_, bound);
    rec["bound"] = bound;
    rec["verdict"] = r.no_relation() ? "no_relation_up_to_bound" : "relation";
    if (r.relation) rec["values"] = poly_list_json(*r.relation);
  }

  void op_proportionality(const Task& t, json& rec) {
    const DerivValue& d1 = deriv(t, "derivation1");
    const DerivValue& d = deriv(t);
    std::vector<std::pair<Polynomial, Polynomial>> pairs;
    const std::string* w = t.get("witness");
    if (!w || *w == "auto") {
      auto fpf = subalgebra_fpf(d.images, *s_, 4);
      if (!fpf.found()) throw PreconditionError("no fixed-point-free witness found up to bound 4");
      for (std::size_t i = 0; i < fpf.cofactors->size(); ++i)
        if (!(*fpf.cofactors)[i].is_zero())
          pairs.emplace_back(s_->evaluate((*fpf.cofactors)[i]), s_->algebra_generators()[i]);
    } else {
      std::size_t start = 0;
      while (start <= w->size()) {
        auto comma = w->find(',', start);
        if (comma == std::string::npos) comma = w->size();
        std::string item = w->substr(start, comma - start);
        auto bar = item.find('|');
        pairs.emplace_back(poly(item.substr(0, bar)), poly(item.substr(bar + 1)));
        start = comma + 1;
      }
    }
    auto r = proportionality_check(d1.op, d.op, pairs, *s_);
    json wp = json::array();
    for (const auto& [a, u] : pairs) wp.push_back({{"a", a.to_string()}, {"u", u.to_string()}});
    rec["witnesses"]["fpf_witness"] = wp;
    if (r.proportional()) {
      rec["verdict"] = "proportional";
      rec["values"] = {r.factor->to_string()};
    } else {
      rec["verdict"] = "counterexample";
      rec["values"] = {r.counterexample->to_string()};
    }
  }

  void op_fiber(const Task& t, json& rec) {
    FiberWitness w;
    w.bound = *opt_int(t, "bound");
    w.coordinates = poly_list(param(t, "coordinates"));
    const std::string& pt = param(t, "point");
    std::size_t start = 0;
    while (start <= pt.size()) {
      auto comma = pt.find(',', start);
      if (comma == std::string::npos) comma = pt.size();
      std::string item = pt.substr(start, comma - start);
      auto arrow = item.find("->");
      std::string var = item.substr(0, arrow);
      var.erase(std::remove(var.begin(), var.end(), ' '), var.end());
      w.point.emplace(var, poly(item.substr(arrow + 2)).constant_value());
      start = comma + 1;
    }
    auto r = check_fiber_witness(*s_, w);
    rec["bound"] = w.bound;
    rec["verdict"] = r.pass ? "pass" : "fail";
    rec["witnesses"]["specialized_generators"] = poly_list_json(r.specialized_generators);
    if (!r.pass) {
      rec["values"] = {r.element->to_string()};
      rec["witnesses"]["direction"] = to_string(*r.direction);
    }
  }

  void op_coordinates(const Task& t, json& rec) {
    std::size_t bound = *opt_int(t, "bound");
    auto coords = poly_list(param(t, "coordinates"));
    Subalgebra c(job_.ctx, s_->base_generators(), coords, s_->measure());
    MembershipOracle in_s(*s_, bound), in_c(c, bound);
    rec["bound"] = bound;
    json forward = json::array(), backward = json::array();
    for (const auto& x : coords) {
      auto m = in_s.member(x);
      if (!m.found()) {
        rec["verdict"] = "fail";
        rec["values"] = {x.to_string()};
        return;
      }
      forward.push_back(membership_json(*s_, *m.witness));
    }
    for (const auto& g : s_->algebra_generators()) {
      auto m = in_c.member(g);
      if (!m.found()) {
        rec["verdict"] = "fail";
        rec["values"] = {g.to_string()};
        return;
      }
      backward.push_back(membership_json(c, *m.witness));
    }
    rec["verdict"] = "coordinate_system";
    rec["values"] = poly_list_json(coords);
    rec["witnesses"] = {{"coordinates_in_algebra", forward}, {"generators_in_coordinates", backward}};
  }

  const JobSpec& job_;
  RunOptions opts_;
  std::shared_ptr<Subalgebra> s_;
  std::map<std::string, DerivValue> derivs_;
  std::map<std::string, Polynomial> slices_;
};

}  // namespace detail

/// Runs every task in order. Family jobs expand into seeded member jobs.
inline Report run_job(const JobSpec& job, const RunOptions& opts = {}) {
  if (!job.family) return detail::JobRunner(job, opts).run();
  Report rep;
  std::uint64_t seed = opts.seed.value_or(job.family->seed);
  for (std::size_t i = 0; i < job.family->count; ++i) {
    JobSpec member = parse_job(family_member_job(job.id, job.family->kind, seed, i));
    rep.append(detail::JobRunner(member, opts).run());
  }
  return rep;
}

}  // namespace lndkit::harness
