#pragma once

#include <string>
#include <vector>

#include "rational.hpp"

namespace ergrel {

/// Injective partially defined atom map; image[i] == -1 marks atoms outside
/// the domain. These generate relations and carry the restricted group
/// elements acting on windows.
struct PartialBijection {
    std::string label;
    std::vector<int> image;  // atom -> atom, -1 = undefined

    PartialBijection() = default;
    PartialBijection(std::string label_, std::vector<int> image_)
        : label(std::move(label_)), image(std::move(image_)) {
        std::vector<int> hit(image.size(), -1);
        for (std::size_t i = 0; i < image.size(); ++i) {
            int y = image[i];
            if (y < 0) continue;
            require(y < int(image.size()), "PartialBijection " + label + ": image out of range");
            require(hit[std::size_t(y)] < 0,
                    "PartialBijection " + label + ": not injective, atoms " +
                        std::to_string(hit[std::size_t(y)]) + " and " + std::to_string(i) +
                        " both map to " + std::to_string(y));
            hit[std::size_t(y)] = int(i);
        }
    }

    static PartialBijection identity(int n, std::string label = "id") {
        std::vector<int> img(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) img[std::size_t(i)] = i;
        return PartialBijection(std::move(label), std::move(img));
    }

    int size() const { return int(image.size()); }
    bool defined_at(int x) const { return image[std::size_t(x)] >= 0; }
    int operator()(int x) const { return image[std::size_t(x)]; }

    bool is_total() const {
        for (int y : image)
            if (y < 0) return false;
        return true;
    }

    PartialBijection inverse() const {
        std::vector<int> inv(image.size(), -1);
        for (std::size_t i = 0; i < image.size(); ++i)
            if (image[i] >= 0) inv[std::size_t(image[i])] = int(i);
        return PartialBijection(label + "^-1", std::move(inv));
    }

    /// Composition this after other: x -> this(other(x)) where both legs are defined.
    PartialBijection compose_after(const PartialBijection& other) const {
        require(size() == other.size(), "compose_after: size mismatch");
        std::vector<int> img(image.size(), -1);
        for (std::size_t i = 0; i < image.size(); ++i) {
            int mid = other.image[i];
            if (mid >= 0 && image[std::size_t(mid)] >= 0) img[i] = image[std::size_t(mid)];
        }
        return PartialBijection(label + "*" + other.label, std::move(img));
    }
};

}  // namespace ergrel
