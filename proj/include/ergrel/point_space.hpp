#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "rational.hpp"

namespace ergrel {

/// Finite atom set with strictly positive weights. Probability spaces have
/// total_mass == 1; sigma-finite windows may exceed it. Zero-weight atoms are
/// rejected at construction.
template <class R>
struct PointSpace {
    std::vector<std::string> ids;
    std::vector<R> weight;

    PointSpace() = default;
    PointSpace(std::vector<std::string> ids_, std::vector<R> weight_)
        : ids(std::move(ids_)), weight(std::move(weight_)) {
        require(ids.size() == weight.size(), "PointSpace: ids/weights size mismatch");
        std::unordered_map<std::string, int> seen;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            require(weight[i] > R(0), "PointSpace: nonpositive weight at atom " + ids[i]);
            require(seen.emplace(ids[i], int(i)).second, "PointSpace: duplicate atom id " + ids[i]);
        }
        index_ = std::move(seen);
    }

    int size() const { return int(ids.size()); }

    R total_mass() const {
        R s(0);
        for (const R& w : weight) s += w;
        return s;
    }

    int index_of(const std::string& id) const {
        auto it = index_.find(id);
        require(it != index_.end(), "PointSpace: unknown atom id " + id);
        return it->second;
    }

    bool has(const std::string& id) const { return index_.count(id) != 0; }

  private:
    std::unordered_map<std::string, int> index_;
};

/// Atom-indexed real-valued function (the f in L^1(X)).
template <class R>
struct MeasurableFunction {
    std::vector<R> values;

    MeasurableFunction() = default;
    explicit MeasurableFunction(std::vector<R> v) : values(std::move(v)) {}
    static MeasurableFunction constant(int n, const R& c) {
        return MeasurableFunction(std::vector<R>(std::size_t(n), c));
    }
    static MeasurableFunction indicator(int n, int atom) {
        MeasurableFunction f = constant(n, R(0));
        f.values.at(std::size_t(atom)) = R(1);
        return f;
    }

    int size() const { return int(values.size()); }
    const R& operator[](int i) const { return values[std::size_t(i)]; }
    R& operator[](int i) { return values[std::size_t(i)]; }
};

template <class R>
MeasurableFunction<R> abs(const MeasurableFunction<R>& f) {
    MeasurableFunction<R> g = f;
    for (R& v : g.values)
        if (v < R(0)) v = -v;
    return g;
}

template <class R>
R integral(const PointSpace<R>& sp, const MeasurableFunction<R>& f) {
    require(f.size() == sp.size(), "integral: function/space size mismatch");
    R s(0);
    for (int i = 0; i < sp.size(); ++i) s += sp.weight[std::size_t(i)] * f[i];
    return s;
}

template <class R>
R l1_norm(const PointSpace<R>& sp, const MeasurableFunction<R>& f) {
    return integral(sp, abs(f));
}

/// Integral of |f|^p, p a positive integer. Exact in rational mode; norm
/// comparisons are done on p-th powers to stay exact.
template <class R>
R lp_pow(const PointSpace<R>& sp, const MeasurableFunction<R>& f, int p) {
    require(p >= 1, "lp_pow: p must be >= 1");
    R s(0);
    for (int i = 0; i < sp.size(); ++i) {
        R a = f[i] < R(0) ? R(-f[i]) : f[i];
        s += sp.weight[std::size_t(i)] * pow_int(a, p);
    }
    return s;
}

}  // namespace ergrel
