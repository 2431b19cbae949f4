#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctcr/errors.hpp"

namespace ctcr {

/// Directed communication topology: informers[j] is the ordered set of agents
/// agent j+1 listens to (1-indexed agent ids, as in the input format).
struct DirectedTopology {
    int n = 0;
    std::vector<std::vector<int>> informers;

    int in_degree(int agent_1based) const {
        return static_cast<int>(informers[static_cast<size_t>(agent_1based - 1)].size());
    }
};

enum class EigTag { Real, ComplexPair };

struct Eigenvalue {
    std::complex<double> value;   // ComplexPair entries carry the Im > 0 member
    EigTag tag = EigTag::Real;
};

/// A cluster of repeated eigenvalues whose eigenspace is too small; the
/// factorization rejects these (Jordan chains would couple the factors).
struct DefectiveCluster {
    std::complex<double> lambda;
    int algebraic = 0;
    int geometric = 0;
};

/// In-degree-normalized adjacency C = Delta^{-1} A_Gamma with its spectrum.
struct WeightedAdjacency {
    Eigen::MatrixXd C;
    std::vector<Eigenvalue> spectrum;   // one entry per conjugate pair, sorted by descending Re
    bool spanning_tree = false;
    int eig_one_multiplicity = 0;       // cluster count within 1e-6 of 1.0
    std::vector<DefectiveCluster> defective_clusters;
};

// Classification / clustering tolerances (see module contract).
inline constexpr double kRealEigTol = 1e-9;      // |Im| below this => real eigenvalue
inline constexpr double kEigClusterTol = 1e-6;   // eigenvalue-1 multiplicity clustering
inline constexpr double kRankTol = 1e-8;         // rank test for defectiveness
inline constexpr double kUnitDiskTol = 1e-9;

/// Parses an edge-list document ("n <count>" then "k -> j" lines, '#'
/// comments) or a JSON document {"n": int, "edges": [[k, j], ...]}.
/// Distinct diagnostics for: zero informers, self-loop, index out of range,
/// duplicate edge.
DirectedTopology load_topology(const std::string& document);
DirectedTopology load_topology_file(const std::string& path);

/// C[j][k] = 1/delta_j if k informs j, else 0. Fills spectrum, spanning_tree,
/// eigenvalue-1 multiplicity and the defectiveness report.
WeightedAdjacency weighted_adjacency(const DirectedTopology& topology);

/// Eigenvalues of a row-stochastic matrix, tagged real / complex-pair
/// (one representative per pair, Im > 0), sorted by descending real part.
std::vector<Eigenvalue> spectrum_of(const Eigen::MatrixXd& C);

/// True iff some root agent reaches every agent along information flow
/// (edge k->j traversable k to j). n reachability searches.
bool has_spanning_tree(const DirectedTopology& topology);

/// All n eigenvalues (pairs expanded with their conjugates) — convenience for
/// multiset checks.
std::vector<std::complex<double>> full_spectrum(const WeightedAdjacency& wa);

} // namespace ctcr
