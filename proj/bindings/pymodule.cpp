#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "freecat/engine.hpp"
#include "freecat/frontend.hpp"
#include "freecat/proofs.hpp"
#include "freecat/semantics.hpp"

namespace py = pybind11;
using namespace freecat;

namespace {

// The C++ core shares immutable nodes through shared_ptr<const T>; python
// sees small value wrappers around those pointers.
struct PyFormula {
  core::FormulaPtr ptr;
};

struct PyArrow {
  core::ArrowPtr ptr;
};

core::Signature make_signature(const std::vector<std::string>& letters,
                               const std::vector<std::string>& arrows) {
  core::Signature sig;
  for (const auto& l : letters) sig.add_letter(l);
  for (const auto& a : arrows) {
    auto colon = a.find(':');
    auto arrow = a.find("->");
    if (colon == std::string::npos || arrow == std::string::npos)
      throw Error("UsageError", "arrow declarations take the form name:src->tgt");
    sig.add_gen(a.substr(0, colon), frontend::parse_formula(a.substr(colon + 1, arrow - colon - 1)),
                frontend::parse_formula(a.substr(arrow + 2)));
  }
  return sig;
}

engine::TheoryConfig make_config(const std::string& preset, const core::Signature& sig,
                                 const std::vector<std::string>& assume) {
  engine::TheoryConfig cfg;
  cfg.preset = engine::preset_from_string(preset);
  cfg.sig = sig;
  for (const auto& a : assume) {
    if (a.rfind("iso ", 0) == 0) {
      engine::add_iso_axiom(cfg, frontend::parse_arrow(a.substr(4)));
    } else {
      auto eq = a.find('=');
      if (eq == std::string::npos)
        throw Error("UsageError", "assumptions take 'iso <arrow>' or '<arrow> = <arrow>'");
      engine::add_equation_axiom(cfg, frontend::parse_arrow(a.substr(0, eq)),
                                 frontend::parse_arrow(a.substr(eq + 1)));
    }
  }
  return cfg;
}

frontend::PremisePolicy policy(const std::string& name) {
  return frontend::policy_from_string(name);
}

py::dict leaf_map_dict(const core::FormulaPtr& source, const core::FormulaPtr& target,
                       const std::vector<std::size_t>& map) {
  py::dict d;
  auto ls = core::leaves(source);
  auto lt = core::leaves(target);
  for (std::size_t i = 0; i < map.size(); ++i) d[py::str(lt[i].path)] = ls[map[i]].path;
  return d;
}

py::dict collapse_dict(const engine::CollapseReport& r) {
  py::dict d;
  d["universe_size"] = r.universe_size;
  d["class_count_before"] = r.class_count_before;
  d["class_count_after"] = r.class_count_after;
  d["preorder_at_bound"] = r.preorder_at_bound;
  d["witness_count"] = r.witness_count;
  d["witnesses"] = r.witnesses;
  d["structural_preorder_at_bound"] = r.structural_preorder_at_bound;
  d["structural_witness_count"] = r.structural_witness_count;
  d["structural_witnesses"] = r.structural_witnesses;
  d["merged_pair_count"] = r.merged_pairs.size();
  d["class_reps"] = r.class_reps;
  d["balance_ok"] = r.balance_ok;
  if (r.balance_offender)
    d["balance_offender"] = py::make_tuple(r.balance_offender->first, r.balance_offender->second);
  return d;
}

}  // namespace

PYBIND11_MODULE(_freecat, m) {
  m.doc() = "identity of deductions in freely generated cartesian and "
            "symmetric associative categories";

  py::register_exception<Error>(m, "FreecatError");

  py::class_<PyFormula>(m, "Formula")
      .def("__str__", [](const PyFormula& f) { return core::to_string(f.ptr); })
      .def("__repr__", [](const PyFormula& f) { return "Formula(" + core::to_string(f.ptr) + ")"; })
      .def("__eq__",
           [](const PyFormula& a, const PyFormula& b) { return core::equal(a.ptr, b.ptr); })
      .def("__hash__",
           [](const PyFormula& f) { return py::hash(py::str(core::to_string(f.ptr))); })
      .def_property_readonly("depth", [](const PyFormula& f) { return core::depth(f.ptr); });

  py::class_<PyArrow>(m, "Arrow")
      .def("__str__", [](const PyArrow& t) { return core::to_string(t.ptr); })
      .def("__repr__", [](const PyArrow& t) { return "Arrow(" + core::to_string(t.ptr) + ")"; })
      .def("__eq__", [](const PyArrow& a, const PyArrow& b) { return core::equal(a.ptr, b.ptr); })
      .def("__hash__", [](const PyArrow& t) { return py::hash(py::str(core::to_string(t.ptr))); })
      .def_property_readonly("structural",
                             [](const PyArrow& t) { return core::is_structural(t.ptr); })
      .def_property_readonly("size", [](const PyArrow& t) { return core::term_size(t.ptr); });

  py::class_<frontend::Sequent>(m, "Sequent")
      .def_property_readonly("premises",
                             [](const frontend::Sequent& s) {
                               std::vector<PyFormula> out;
                               for (const auto& p : s.premises) out.push_back({p});
                               return out;
                             })
      .def_property_readonly("conclusion",
                             [](const frontend::Sequent& s) { return PyFormula{s.conclusion}; })
      .def("__str__", [](const frontend::Sequent& s) { return frontend::to_string(s); })
      .def("__repr__",
           [](const frontend::Sequent& s) { return "Sequent(" + frontend::to_string(s) + ")"; });

  py::class_<core::Signature>(m, "Signature")
      .def(py::init(&make_signature), py::arg("letters") = std::vector<std::string>{},
           py::arg("arrows") = std::vector<std::string>{});

  py::class_<engine::TheoryConfig>(m, "TheoryConfig")
      .def(py::init(&make_config), py::arg("preset") = "cartesian",
           py::arg("sig") = core::Signature{}, py::arg("assume") = std::vector<std::string>{});

  // frontend
  m.def("parse_formula",
        [](const std::string& s) { return PyFormula{frontend::parse_formula(s)}; });
  m.def("parse_arrow", [](const std::string& s) { return PyArrow{frontend::parse_arrow(s)}; });
  m.def("parse_sequent", [](const std::string& s) { return frontend::parse_sequent(s); });
  m.def("typecheck", [](const PyArrow& t, const core::Signature& sig) {
    core::Typing ty = core::typecheck(t.ptr, sig);
    return py::make_tuple(PyFormula{ty.source}, PyFormula{ty.target});
  });
  m.def("leaves", [](const PyFormula& f) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& l : core::leaves(f.ptr)) out.emplace_back(l.path, l.letter);
    return out;
  });
  m.def("expand_diag", [](const PyArrow& t) { return PyArrow{core::expand_diag(t.ptr)}; });
  m.def("apply_policy", [](const frontend::Sequent& s, const std::string& pol) {
    return frontend::apply_policy(s, policy(pol));
  });
  m.def("substitute_letter",
        [](const frontend::Sequent& s, const std::string& from, const std::string& to,
           const core::Signature& sig) { return frontend::substitute_letter(s, from, to, sig); });
  m.def("apply_thinning",
        [](const frontend::Sequent& s, const PyFormula& c, const std::string& pol) {
          auto r = frontend::apply_thinning(s, c.ptr, policy(pol));
          return py::make_tuple(r.sequent, r.invisible);
        });
  m.def("sequent_to_arrow_type", [](const frontend::Sequent& s, const std::string& pol) {
    auto [src, tgt] = frontend::sequent_to_arrow_type(s, policy(pol));
    return py::make_tuple(PyFormula{src}, PyFormula{tgt});
  });
  m.def("object_image", [](const PyFormula& f, const std::string& pol) {
    return frontend::object_image(f.ptr, policy(pol));
  });

  // semantics
  m.def("interpret_cartesian", [](const PyArrow& t) {
    auto om = semantics::interpret_cartesian(t.ptr);
    return leaf_map_dict(om.source, om.target, om.map);
  });
  m.def("interpret_symmetric", [](const PyArrow& t) {
    auto bj = semantics::interpret_symmetric(t.ptr);
    return leaf_map_dict(bj.source, bj.target, bj.map);
  });
  m.def("decide_equal_cartesian", [](const PyArrow& a, const PyArrow& b) {
    return semantics::decide_equal_cartesian(a.ptr, b.ptr);
  });
  m.def("decide_equal_symmetric", [](const PyArrow& a, const PyArrow& b) {
    return semantics::decide_equal_symmetric(a.ptr, b.ptr);
  });
  m.def(
      "eval_finite_model",
      [](const PyArrow& t, const std::map<std::string, std::size_t>& carriers,
         const std::map<std::string, std::vector<std::size_t>>& tables) {
        semantics::FiniteModel fm{carriers, tables};
        return semantics::eval_finite_model(t.ptr, fm).table;
      },
      py::arg("term"), py::arg("carriers"),
      py::arg("tables") = std::map<std::string, std::vector<std::size_t>>{});

  // engine
  m.def(
      "term_universe",
      [](const engine::TheoryConfig& cfg, std::size_t size, std::size_t depth, std::size_t cap) {
        std::vector<PyArrow> out;
        for (const auto& t : engine::term_universe(cfg, {size, depth, cap})) out.push_back({t});
        return out;
      },
      py::arg("config"), py::arg("size") = 7, py::arg("depth") = 2, py::arg("cap") = 200000);
  m.def(
      "detect_collapse",
      [](const engine::TheoryConfig& cfg, std::size_t size, std::size_t depth, std::size_t cap) {
        return collapse_dict(engine::detect_collapse(cfg, {size, depth, cap}));
      },
      py::arg("config"), py::arg("size") = 7, py::arg("depth") = 2, py::arg("cap") = 200000);
  m.def(
      "closure_equal",
      [](const engine::TheoryConfig& cfg, const PyArrow& a, const PyArrow& b, std::size_t size,
         std::size_t depth, std::size_t cap) {
        core::ArrowPtr ea = core::expand_diag(a.ptr), eb = core::expand_diag(b.ptr);
        engine::Bounds bounds{std::max({size, core::term_size(ea), core::term_size(eb)}), depth,
                              cap};
        auto universe = engine::term_universe(cfg, bounds);
        auto cl = engine::congruence_close(cfg, universe);
        std::optional<std::size_t> i, j;
        for (std::size_t k = 0; k < universe.size(); ++k) {
          if (!i && core::equal(universe[k], ea)) i = k;
          if (!j && core::equal(universe[k], eb)) j = k;
        }
        if (!i || !j) throw Error("InvalidBounds", "terms not covered by the universe bounds");
        return cl.class_of[*i] == cl.class_of[*j];
      },
      py::arg("config"), py::arg("lhs"), py::arg("rhs"), py::arg("size") = 7,
      py::arg("depth") = 2, py::arg("cap") = 200000);
  m.def(
      "preorder_and_fullness",
      [](const engine::TheoryConfig& cfg, std::size_t size, std::size_t depth, std::size_t cap) {
        auto [p, f] = engine::preorder_and_fullness_checks(cfg, {size, depth, cap});
        return py::make_tuple(p, f);
      },
      py::arg("config"), py::arg("size") = 7, py::arg("depth") = 2, py::arg("cap") = 200000);
  m.def(
      "w_iso_criterion",
      [](const engine::TheoryConfig& cfg, const PyFormula& B, std::size_t size, std::size_t depth,
         std::size_t cap) { return engine::w_iso_criterion(cfg, {size, depth, cap}, B.ptr); },
      py::arg("config"), py::arg("formula"), py::arg("size") = 7, py::arg("depth") = 2,
      py::arg("cap") = 200000);

  // proofs
  m.def("check_scripts", [](const std::string& text) {
    py::list out;
    for (const auto& s : proofs::parse_scripts(text)) {
      proofs::Verdict v = proofs::check_script(s);
      py::dict d;
      d["script"] = v.script;
      d["accepted"] = v.accepted;
      d["failed_line"] = v.failed_line;
      d["reason"] = v.reason;
      out.append(d);
    }
    return out;
  });
  m.def("bundled_script_text", []() { return proofs::bundled_script_text(); });
}
