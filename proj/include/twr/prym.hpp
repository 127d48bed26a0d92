#pragma once

#include "twr/intlat.hpp"
#include "twr/ngonal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twr {

// Fundamental cycles of a spanning tree, as columns in edge coordinates with the
// reference orientation of each edge.
struct CycleLattice {
  Graph graph;
  IntMatrix basis;  // |E| x genus
};

// Vertex-by-edge matrix with column e equal to end(e) - start(e).
IntMatrix boundary_matrix(const Graph& g);

// Throws DisconnectedGraph.
CycleLattice h1_basis(const Graph& g);

// Cycle basis of a possibly disconnected graph (one spanning tree per component).
IntMatrix cycle_basis(const Graph& g);

// Sum over edges of u_e * v_e * length(e).
LinearForm integration_pairing(const Graph& g, const std::vector<Int>& u, const std::vector<Int>& v);

// scale * Bᵀ diag(length) B.
GramMatrix lattice_gram(const Graph& g, const IntMatrix& basis, const Rat& scale);

// Push-forward of edge chains along a cover: |E(base)| x |E(top)| with entries ±1.
IntMatrix pushforward_matrix(const DoubleCover& c);

// True when v(iota e) = -v(e) for every edge, accounting for orientations.
bool is_antisymmetric(const DoubleCover& c, const std::vector<Int>& v);

struct PrymLattice {
  IntMatrix basis;  // |E(top)| x rank
  GramMatrix gram;  // principal polarization
  std::size_t rank() const { return basis.cols(); }
};

// Kernel of the push-forward on the first homology of the top, with Gram matrix
// half the integration pairing. Throws DilatedCover or DisconnectedInput.
PrymLattice prym_lattice(const DoubleCover& c);
PrymLattice prym_lattice(const Tower& t);

// Edge-level correspondence between the input top and the top of one output.
struct Correspondence {
  int output = 0;
  IntMatrix forward;   // |E(input top)| x |E(output top)|
  IntMatrix backward;  // |E(output top)| x |E(input top)|
};

// Builds S and its weighted adjoint and checks that both are chain maps sending
// cycles to cycles. Throws ValidationFailure.
Correspondence correspondence(const Tower& t, const SplitOutput& outputs, int i);

struct CheckResult {
  bool passed = true;
  std::string detail;
};

// Both composition identities at every vertex and half-edge of both tops.
CheckResult verify_point_identities(const Tower& t, const SplitOutput& outputs, int i);

// Matrices of S on L1 -> L and of the adjoint on L -> L1, in lattice coordinates.
// Throws ValidationFailure when an image leaves the target lattice.
struct RestrictedMaps {
  IntMatrix s;   // rank(L) x rank(L1)
  IntMatrix st;  // rank(L1) x rank(L)
};
RestrictedMaps restrict_to_pryms(const Correspondence& c, const PrymLattice& p, const PrymLattice& p1);

// Both composites equal 4 times the identity.
CheckResult verify_four_identity(const RestrictedMaps& m);

// Gram-level doubling for both maps, checked as identities of linear forms.
CheckResult verify_polarization_doubling(const Tower& t, const Tower& out, const Correspondence& c,
                                         const PrymLattice& p, const PrymLattice& p1);

struct PsiFactor {
  IntMatrix psi;    // L1 -> L
  IntMatrix psi_t;  // L -> L1
  bool isometry = false;
};

// ψ = S/2 on the Prym lattices. Throws NotDivisible naming an element whose image
// has an odd coordinate, or NotUnimodular.
PsiFactor factor_psi(const Correspondence& c, const PrymLattice& p, const PrymLattice& p1);

struct PsiReport {
  std::array<std::optional<PsiFactor>, 2> factors;
  std::array<std::string, 2> errors;
  std::array<GramMatrix, 2> output_grams;
  GramMatrix input_gram;
  bool passed = false;
};

PsiReport prym_isomorphism_check(const Tower& t);

// b1(top) - b1(mid), the rank of the Prym lattice of a connected free cover.
long prym_dimension(const Tower& t);

// The full identity suite on both outputs of the construction.
struct SuiteReport {
  struct Output {
    long dimension = 0;
    bool prym_checked = false;  // false when the input or output top is disconnected
    bool point_identities = false;
    bool four_identity = false;
    bool doubling = false;
    std::optional<bool> psi;  // isometry found; unset when factor_psi failed
    std::string psi_error;
    std::string detail;
  };
  long input_dimension = 0;
  bool base_is_tree = false;
  bool dimensions_agree = false;
  std::array<Output, 2> outputs;
  bool passed = false;
};

// Throws whatever split or the input Prym lattice throws.
SuiteReport identity_suite(const Tower& t);

}  // namespace twr
