#pragma once

#include <map>
#include <string>
#include <vector>

#include "maharam.hpp"

namespace ergrel {

/// A hypothesis-satisfying instance: the boundary-side measure-class action
/// and a p.m.p. action on X carrying the same generator labels.
struct ExampleBundle {
    MeasureClassAction action;
    GroupAction<Rat> x_action;
};

namespace detail {

inline PartialBijection rotation_perm(int n, int step, std::string label) {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[std::size_t(i)] = ((i + step) % n + n) % n;
    return PartialBijection(std::move(label), std::move(img));
}

inline PointSpace<Rat> uniform_points(int n, std::string prefix) {
    std::vector<std::string> ids;
    std::vector<Rat> w;
    for (int i = 0; i < n; ++i) {
        ids.push_back(prefix + std::to_string(i));
        w.push_back(Rat(1, n));
    }
    return PointSpace<Rat>(std::move(ids), std::move(w));
}

inline bool reduced_word_ok(const std::string& w) {
    auto inverse_of = [](char c) { return char(std::isupper(c) ? std::tolower(c) : std::toupper(c)); };
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] == inverse_of(w[i - 1])) return false;
    return true;
}

}  // namespace detail

/// Depth-d truncation of the boundary of the rank-2 free group: atoms are the
/// reduced words of length 1..d (cylinder names), a cylinder of length l has
/// weight (1/4)(1/3)^{l-1} scaled by 1/d so the space is a probability space,
/// and each generator acts by the prefix map w -> reduce(g w) wherever the
/// result stays within depth d. All Radon-Nikodym ratios are 3^{+-1}, lambda
/// = 1/3.
inline ExampleBundle free_boundary_trunc(int depth, int x_size = 5) {
    require(depth >= 1, "free_boundary_trunc: depth must be >= 1");
    const std::string letters = "abAB";
    std::vector<std::string> words;
    std::vector<std::string> frontier = {""};
    for (int len = 1; len <= depth; ++len) {
        std::vector<std::string> next;
        for (const auto& w : frontier)
            for (char c : letters) {
                std::string cand = w + c;
                if (detail::reduced_word_ok(cand)) next.push_back(cand);
            }
        std::sort(next.begin(), next.end());
        words.insert(words.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::map<std::string, int> index;
    std::vector<Rat> weights;
    for (std::size_t i = 0; i < words.size(); ++i) {
        index[words[i]] = int(i);
        weights.push_back(Rat(1, 4 * depth) * pow_int(Rat(1, 3), long(words[i].size()) - 1));
    }

    auto prefix_map = [&](char g, char ginv, const std::string& label) {
        std::vector<int> img(words.size(), -1);
        for (std::size_t i = 0; i < words.size(); ++i) {
            const std::string& w = words[i];
            std::string out = w.front() == ginv ? w.substr(1) : std::string(1, g) + w;
            if (out.empty() || int(out.size()) > depth) continue;
            img[i] = index.at(out);
        }
        return PartialBijection(label, std::move(img));
    };

    ExampleBundle ex;
    ex.action.B = PointSpace<Rat>(words, weights);
    ex.action.lambda = Rat(1, 3);
    ex.action.generators = {prefix_map('a', 'A', "a"), prefix_map('b', 'B', "b")};
    ex.action.validate();
    ex.x_action.space = detail::uniform_points(x_size, "x");
    ex.x_action.perms = {detail::rotation_perm(x_size, 1, "a"),
                         detail::rotation_perm(x_size, 2, "b")};
    return ex;
}

/// The (1/4, 3/4) two-atom swap with lambda = 1/3: the smallest action whose
/// cocycle is nontrivial. X defaults to an odd rotation so the base product
/// stays ergodic.
inline ExampleBundle two_atom_typeIII(int x_size = 3) {
    ExampleBundle ex;
    ex.action.B = PointSpace<Rat>({"b0", "b1"}, {Rat(1, 4), Rat(3, 4)});
    ex.action.lambda = Rat(1, 3);
    std::vector<int> swap_img = {1, 0};
    ex.action.generators = {PartialBijection("g", swap_img)};
    ex.action.validate();
    ex.x_action.space = detail::uniform_points(x_size, "x");
    ex.x_action.perms = {detail::rotation_perm(x_size, 1, "g")};
    return ex;
}

/// Uniform rotation on Z/L (measure preserving, cocycle identically zero)
/// with a rotation on Z/m as the p.m.p. action. The window averages then
/// reduce to Birkhoff ball averages on X.
inline ExampleBundle cycle_odometer(int L = 101, int x_size = 4) {
    require(L >= 3, "cycle_odometer: L must be >= 3");
    ExampleBundle ex;
    ex.action.B = detail::uniform_points(L, "b");
    ex.action.lambda = Rat(1, 2);
    ex.action.generators = {detail::rotation_perm(L, 1, "g")};
    ex.x_action.space = detail::uniform_points(x_size, "x");
    ex.x_action.perms = {detail::rotation_perm(x_size, 1, "g")};
    return ex;
}

/// Uniform X with label-matched permutations over a trivial two-atom base.
inline ExampleBundle bernoulli_x(int x_size = 4) {
    ExampleBundle ex;
    ex.action.B = detail::uniform_points(2, "b");
    ex.action.lambda = Rat(1, 2);
    std::vector<int> swap_img = {1, 0};
    ex.action.generators = {PartialBijection("g", swap_img)};
    ex.x_action.space = detail::uniform_points(x_size, "x");
    ex.x_action.perms = {detail::rotation_perm(x_size, 1, "g")};
    return ex;
}

/// Cycle with weights proportional to lambda^i: the rotation has cocycle +1
/// along the cycle and -(m-1) at the wrap, so windows of size N <= m attain
/// every residue and the cocycle partition has k = N.
inline ExampleBundle lambda_cycle(int m, const Rat& lambda, int x_size = 1) {
    require(m >= 2, "lambda_cycle: m must be >= 2");
    std::vector<std::string> ids;
    std::vector<Rat> w;
    Rat norm(0);
    for (int i = 0; i < m; ++i) norm += pow_int(lambda, i);
    for (int i = 0; i < m; ++i) {
        ids.push_back("c" + std::to_string(i));
        w.push_back(pow_int(lambda, i) / norm);
    }
    ExampleBundle ex;
    ex.action.B = PointSpace<Rat>(std::move(ids), std::move(w));
    ex.action.lambda = lambda;
    ex.action.generators = {detail::rotation_perm(m, 1, "g")};
    ex.action.validate();
    ex.x_action.space = detail::uniform_points(x_size, "x");
    ex.x_action.perms = {x_size == 1 ? PartialBijection::identity(1, "g")
                                     : detail::rotation_perm(x_size, 1, "g")};
    return ex;
}

/// Named example dispatch used by the CLI and the experiment layer.
inline ExampleBundle build_example(const std::string& name,
                                   const std::map<std::string, long>& params = {}) {
    auto get = [&](const std::string& key, long fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "two_atom_typeIII") return two_atom_typeIII(int(get("x_size", 3)));
    if (name == "cycle_odometer")
        return cycle_odometer(int(get("L", 101)), int(get("x_size", 4)));
    if (name == "free_boundary_trunc")
        return free_boundary_trunc(int(get("depth", 3)), int(get("x_size", 5)));
    if (name == "bernoulli_x") return bernoulli_x(int(get("x_size", 4)));
    throw std::invalid_argument("build_example: unknown example name " + name);
}

}  // namespace ergrel
