#include "ctcr/topology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace ctcr {

namespace {

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

void add_edge(DirectedTopology& topo, int from, int to, std::set<std::pair<int, int>>& seen) {
    if (from < 1 || from > topo.n || to < 1 || to > topo.n)
        throw InputError("edge " + std::to_string(from) + " -> " + std::to_string(to) +
                         ": agent index out of range [1, " + std::to_string(topo.n) + "]");
    if (from == to)
        throw InputError("edge " + std::to_string(from) + " -> " + std::to_string(to) +
                         ": self-loop is not allowed");
    if (!seen.insert({from, to}).second)
        throw InputError("duplicate edge " + std::to_string(from) + " -> " + std::to_string(to));
    topo.informers[static_cast<size_t>(to - 1)].push_back(from);
}

void check_informers(const DirectedTopology& topo) {
    for (int j = 1; j <= topo.n; ++j)
        if (topo.in_degree(j) == 0)
            throw InputError("agent " + std::to_string(j) + " has no informers");
}

DirectedTopology parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("topology JSON parse error: ") + e.what());
    }
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw InputError("topology JSON: missing integer field \"n\"");
    DirectedTopology topo;
    topo.n = doc["n"].get<int>();
    if (topo.n < 2) throw InputError("agent count must be at least 2");
    topo.informers.assign(static_cast<size_t>(topo.n), {});
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw InputError("topology JSON: missing array field \"edges\"");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("topology JSON: each edge must be a pair [k, j]");
        add_edge(topo, e[0].get<int>(), e[1].get<int>(), seen);
    }
    check_informers(topo);
    return topo;
}

DirectedTopology parse_edge_list(const std::string& text) {
    DirectedTopology topo;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_n = false;
    std::set<std::pair<int, int>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;   // blank line
        if (!have_n) {
            int count = 0;
            if (first != "n" || !(ls >> count))
                throw InputError("line " + std::to_string(lineno) +
                                 ": expected header \"n <count>\" before any edge");
            if (count < 2) throw InputError("agent count must be at least 2");
            topo.n = count;
            topo.informers.assign(static_cast<size_t>(count), {});
            have_n = true;
            continue;
        }
        std::string arrow;
        int to = 0;
        int from = 0;
        try {
            from = std::stoi(first);
        } catch (...) {
            throw InputError("line " + std::to_string(lineno) + ": expected \"k -> j\"");
        }
        if (!(ls >> arrow >> to) || arrow != "->")
            throw InputError("line " + std::to_string(lineno) + ": expected \"k -> j\"");
        add_edge(topo, from, to, seen);
    }
    if (!have_n) throw InputError("empty topology document");
    check_informers(topo);
    return topo;
}

} // namespace

DirectedTopology load_topology(const std::string& document) {
    return looks_like_json(document) ? parse_json(document) : parse_edge_list(document);
}

DirectedTopology load_topology_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open topology file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return load_topology(buf.str());
}

bool has_spanning_tree(const DirectedTopology& topology) {
    const int n = topology.n;
    std::vector<std::vector<int>> out(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j)
        for (int k : topology.informers[static_cast<size_t>(j - 1)])
            out[static_cast<size_t>(k - 1)].push_back(j - 1);
    for (int root = 0; root < n; ++root) {
        std::vector<char> vis(static_cast<size_t>(n), 0);
        std::queue<int> q;
        q.push(root);
        vis[static_cast<size_t>(root)] = 1;
        int count = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : out[static_cast<size_t>(u)])
                if (!vis[static_cast<size_t>(v)]) {
                    vis[static_cast<size_t>(v)] = 1;
                    ++count;
                    q.push(v);
                }
        }
        if (count == n) return true;
    }
    return false;
}

std::vector<Eigenvalue> spectrum_of(const Eigen::MatrixXd& C) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(C);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalue iteration did not converge (max iterations reached)");
    std::vector<Eigenvalue> spec;
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        std::complex<double> v = ev(i);
        if (std::abs(v.imag()) < kRealEigTol) {
            spec.push_back({{v.real(), 0.0}, EigTag::Real});
        } else if (v.imag() > 0.0) {
            spec.push_back({v, EigTag::ComplexPair});
        } // negative-Im member of a pair: represented by its conjugate
    }
    std::sort(spec.begin(), spec.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    return spec;
}

std::vector<std::complex<double>> full_spectrum(const WeightedAdjacency& wa) {
    std::vector<std::complex<double>> all;
    for (const auto& e : wa.spectrum) {
        all.push_back(e.value);
        if (e.tag == EigTag::ComplexPair) all.push_back(std::conj(e.value));
    }
    return all;
}

namespace {

std::vector<DefectiveCluster> find_defective_clusters(const Eigen::MatrixXd& C,
                                                      const std::vector<std::complex<double>>& all) {
    // Greedy clustering at the 1e-6 tolerance; only Im >= 0 representatives
    // (conjugate clusters mirror each other).
    std::vector<DefectiveCluster> bad;
    const int n = static_cast<int>(C.rows());
    std::vector<char> used(all.size(), 0);
    for (size_t i = 0; i < all.size(); ++i) {
        if (used[i] || all[i].imag() < -kEigClusterTol) continue;
        std::complex<double> lambda = all[i];
        int algebraic = 0;
        for (size_t j = 0; j < all.size(); ++j) {
            if (!used[j] && std::abs(all[j] - lambda) <= kEigClusterTol) {
                used[j] = 1;
                ++algebraic;
            }
        }
        if (algebraic < 2) continue;
        Eigen::MatrixXcd shifted = C.cast<std::complex<double>>();
        shifted.diagonal().array() -= lambda;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(shifted);
        qr.setThreshold(kRankTol);
        int geometric = n - static_cast<int>(qr.rank());
        if (geometric < algebraic) bad.push_back({lambda, algebraic, geometric});
    }
    return bad;
}

} // namespace

WeightedAdjacency weighted_adjacency(const DirectedTopology& topology) {
    const int n = topology.n;
    WeightedAdjacency wa;
    wa.C = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j <= n; ++j) {
        double w = 1.0 / topology.in_degree(j);
        for (int k : topology.informers[static_cast<size_t>(j - 1)])
            wa.C(j - 1, k - 1) = w;
    }
    wa.spectrum = spectrum_of(wa.C);
    wa.spanning_tree = has_spanning_tree(topology);
    auto all = full_spectrum(wa);
    wa.eig_one_multiplicity = static_cast<int>(std::count_if(all.begin(), all.end(), [](auto v) {
        return std::abs(v - std::complex<double>(1.0, 0.0)) <= kEigClusterTol;
    }));
    wa.defective_clusters = find_defective_clusters(wa.C, all);
    return wa;
}

} // namespace ctcr
