#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "freecat/core.hpp"

namespace freecat::proofs {

// ---------------------------------------------------------------------------
// A small checker for equational proof scripts over two theories:
//
//   adjunction  an abstract adjunction F -| G with unit gamma and counit phi,
//               plus the diagonal functor D into the product category; D is
//               definitional, D(x) = (x, x), and equality of pair arrows is
//               componentwise
//   cartesian   the concrete term language of the cartesian presets, with
//               the presentation axioms idl/idr/assoc/beta1/beta2/eta/top
//
// Scripts are line-based; see parse_scripts for the format.
// ---------------------------------------------------------------------------

enum class Theory { Adjunction, Cartesian };

// Abstract objects: variables, functor applications, pairs (objects of the
// product category), and metavariables used by schematic hypotheses.
enum class ObjKind { Var, App, PairO, Meta };

struct AObj;
using AObjPtr = std::shared_ptr<const AObj>;

struct AObj {
  ObjKind kind;
  std::string name;  // Var / Meta / App functor
  AObjPtr arg;       // App
  AObjPtr l, r;      // PairO

  static AObjPtr var(std::string n);
  static AObjPtr meta(std::string n);
  static AObjPtr app(std::string functor, AObjPtr x);
  static AObjPtr pairo(AObjPtr a, AObjPtr b);
};

bool equal(const AObjPtr& a, const AObjPtr& b);
std::string to_string(const AObjPtr& o);

// Abstract arrows: declared variables, identities, composition, functor
// images, natural-family instances (gamma, phi, script-declared families),
// and pair arrows of the product category.
enum class AArrKind { Var, Meta, Id, Comp, FMap, Fam, PairA };

struct AArr;
using AArrPtr = std::shared_ptr<const AArr>;

struct AArr {
  AArrKind kind;
  std::string name;  // Var / Meta / FMap functor / Fam family
  AObjPtr obj;       // Id object / Fam index object
  AArrPtr u, v;      // Comp: u after v; PairA: components

  static AArrPtr var(std::string n);
  static AArrPtr meta(std::string n);
  static AArrPtr id(AObjPtr x);
  static AArrPtr comp(AArrPtr g, AArrPtr f);
  static AArrPtr fmap(std::string functor, AArrPtr f);
  static AArrPtr fam(std::string family, AObjPtr x);
  static AArrPtr paira(AArrPtr a, AArrPtr b);
};

bool equal(const AArrPtr& a, const AArrPtr& b);
std::string to_string(const AArrPtr& t);

struct AEq {
  AArrPtr lhs, rhs;
};

struct CEq {
  core::ArrowPtr lhs, rhs;
};

struct Justification {
  enum class Kind {
    Axiom,      // axiom <name>
    Line,       // line <n>          (restatement or pair-equation component)
    Hyp,        // hyp               (any hypothesis / implication antecedent)
    Cong,       // cong <n>          (replace subterms by the cited equation)
    Symm,       // symm <n>
    Trans,      // trans <n> <m>
    Functor,    // functor <F|G>     (F(g . f) = F(g) . F(f), F(id) = id)
    NatGamma,   // nat gamma
    NatPhi,     // nat phi
    Triangle,   // triangle
    Monic,      // monic <family> <n>
    Faithful,   // faithful <F> <n>
    Fullness,   // fullness <F|D> <witness>
  };
  Kind kind = Kind::Hyp;
  std::string name;   // axiom name / functor / family
  std::string name2;  // witness name
  int ref1 = 0, ref2 = 0;
};

Justification justification_from_string(const std::string& text);
std::string to_string(const Justification& j);

struct Step {
  int num = 0;
  AEq aeq;  // adjunction theory
  CEq ceq;  // cartesian theory
  Justification just;
  std::string raw;
};

struct Goal {
  bool implication = false;
  AEq a_antecedent, a_consequent;
  CEq c_antecedent, c_consequent;
};

struct ProofScript {
  std::string name;
  Theory theory = Theory::Adjunction;

  // adjunction declarations
  std::vector<std::string> objects;
  std::map<std::string, std::pair<AObjPtr, AObjPtr>> arrows;
  std::map<std::string, std::pair<AObjPtr, AObjPtr>> witnesses;  // fullness-introduced
  std::set<std::string> families;
  bool hyp_faithful_f = false;
  bool hyp_monic_gamma = false;
  bool hyp_full_d = false;
  std::optional<std::string> full_witness_family;  // full F witness <fam>
  std::optional<std::string> iso_inverse_family;   // iso gamma inverse <fam>
  std::vector<AEq> hyp_eqs;  // schematic over object metavariables

  // cartesian declarations
  core::Signature sig;
  std::vector<CEq> hyp_eqs_c;

  Goal goal;
  std::vector<Step> steps;
};

struct Verdict {
  std::string script;
  bool accepted = false;
  int failed_line = 0;  // 0 when the failure is not tied to a step
  std::string reason;
};

// Parses a script file. Format, one item per line ('#' comments):
//   script: <name>
//   theory: adjunction | cartesian
//   obj: <names...>                     arrow: <name> : <obj> -> <obj>
//   family: <name>                      witness: <name> : <obj> -> <obj>
//   letters: <names...>                 garrow: <name> : <formula> -> <formula>
//   hyp: faithful F | monic gamma | full F witness <fam> | full D
//      | iso gamma inverse <fam> | eq <lhs> = <rhs>
//   goal: <eq> | <eq> => <eq>
//   <n>. <lhs> = <rhs> ; <justification>
//   end
std::vector<ProofScript> parse_scripts(std::string_view text);

// Validates every step mechanically; a rejection names the first bad line.
Verdict check_script(const ProofScript& s);

// The bundled scripts: the adjunction propositions (4.1/4.2 and the
// corollary, each direction), the diagonal-functor fullness equivalence
// (both directions), the naturality lemma for the contraction arrow, the
// two projection/contraction chains, and the projection-symmetry identity.
const std::string& bundled_script_text();
std::vector<ProofScript> bundled_scripts();

}  // namespace freecat::proofs
