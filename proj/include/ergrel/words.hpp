#pragma once

#include <string>
#include <vector>

#include "extension.hpp"
#include "maharam.hpp"

namespace ergrel {

/// Reduced word over generator labels: letter k > 0 is generator k-1, letter
/// k < 0 its inverse. Applied right to left, like composition.
struct GroupWord {
    std::vector<int> letters;

    bool is_identity() const { return letters.empty(); }
    int length() const { return int(letters.size()); }

    GroupWord prepend(int letter) const {
        GroupWord w;
        if (!letters.empty() && letters.front() == -letter) {
            w.letters.assign(letters.begin() + 1, letters.end());
        } else {
            w.letters.reserve(letters.size() + 1);
            w.letters.push_back(letter);
            w.letters.insert(w.letters.end(), letters.begin(), letters.end());
        }
        return w;
    }

    std::string str(const std::vector<std::string>& labels) const {
        if (letters.empty()) return "e";
        std::string out;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (i) out += ".";
            int l = letters[i];
            out += labels[std::size_t(std::abs(l) - 1)];
            if (l < 0) out += "^-1";
        }
        return out;
    }

    bool operator==(const GroupWord& o) const { return letters == o.letters; }
    bool operator<(const GroupWord& o) const {
        if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
        return letters < o.letters;
    }
};

/// Evaluate a word on an atom through per-label partial maps (and their
/// inverses). Returns -1 when any leg is undefined.
inline int apply_word(const GroupWord& w, int atom, const std::vector<PartialBijection>& gens,
                      const std::vector<PartialBijection>& gens_inv) {
    int cur = atom;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        int l = *it;
        const PartialBijection& m = l > 0 ? gens[std::size_t(l - 1)] : gens_inv[std::size_t(-l - 1)];
        if (cur < 0 || !m.defined_at(cur)) return -1;
        cur = m(cur);
    }
    return cur;
}

/// All reduced words up to max_length with their window actions, enumerated
/// breadth-first so index order is (length, lexicographic) and the canonical
/// word for a target is the first hit.
struct WordSet {
    std::vector<std::string> labels;
    std::vector<GroupWord> words;              // words[0] = identity
    std::vector<std::vector<int>> window_map;  // per word: window atom -> atom or -1

    int word_count() const { return int(words.size()); }
};

inline WordSet enumerate_words(const std::vector<PartialBijection>& window_gens, int window_size,
                               int max_length) {
    require(max_length >= 0, "enumerate_words: negative length");
    WordSet ws;
    std::vector<PartialBijection> inv;
    for (const auto& g : window_gens) {
        ws.labels.push_back(g.label);
        inv.push_back(g.inverse());
    }
    auto eval_map = [&](const GroupWord& w) {
        std::vector<int> m(static_cast<std::size_t>(window_size));
        for (int a = 0; a < window_size; ++a) m[std::size_t(a)] = apply_word(w, a, window_gens, inv);
        return m;
    };
    ws.words.push_back(GroupWord{});
    ws.window_map.push_back(eval_map(GroupWord{}));
    std::vector<GroupWord> frontier = {GroupWord{}};
    for (int len = 1; len <= max_length; ++len) {
        std::vector<GroupWord> next;
        for (const auto& w : frontier)
            for (int l = 1; l <= int(window_gens.size()); ++l)
                for (int s : {l, -l}) {
                    auto cand = w.prepend(s);
                    if (cand.length() != len) continue;  // reduced away
                    next.push_back(cand);
                }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (const auto& w : next) {
            ws.words.push_back(w);
            ws.window_map.push_back(eval_map(w));
        }
        frontier = std::move(next);
    }
    return ws;
}

/// X-side evaluation of a word through a p.m.p. action (total permutations).
inline int apply_word_x(const GroupWord& w, int x, const GroupAction<Rat>& act,
                        const std::vector<PartialBijection>& act_inv) {
    int cur = x;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        int l = *it;
        const PartialBijection& m =
            l > 0 ? act.perms[std::size_t(l - 1)] : act_inv[std::size_t(-l - 1)];
        cur = m(cur);
    }
    return cur;
}

}  // namespace ergrel
