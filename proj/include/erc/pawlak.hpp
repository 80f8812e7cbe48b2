#pragma once

// Reference structures from classical rough set theory: the power set of a
// small universe with the lower and upper approximations of a partition.

#include "erc/structure.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace erc {

class partition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Name of the subset `mask` of `universe`: "∅" or "{1 2}".
inline std::string subset_name(const std::vector<int>& universe, unsigned mask)
{
    if (mask == 0)
        return "∅";
    std::string out = "{";
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (mask >> i & 1u) {
            if (out.size() > 1)
                out += " ";
            out += std::to_string(universe[i]);
        }
    return out + "}";
}

/// Carrier = all subsets of U (element k is the subset with bitmask k over U
/// in the given order), ∨ = ∪, ∧ = ∩, ≤ = P = ⊆, ⊥ = ∅, ⊤ = U, and a single
/// pair l/u of classical approximations.
inline FiniteStructure pawlak_structure(const std::vector<int>& universe, const std::vector<std::vector<int>>& blocks)
{
    const std::size_t m = universe.size();
    if (m == 0 || m > 4)
        throw partition_error("universe must have between 1 and 4 elements");
    if (std::set<int>(universe.begin(), universe.end()).size() != m)
        throw partition_error("universe has repeated elements");

    auto index_of = [&](int x) {
        auto it = std::find(universe.begin(), universe.end(), x);
        if (it == universe.end())
            throw partition_error("block element " + std::to_string(x) + " is not in the universe");
        return static_cast<unsigned>(it - universe.begin());
    };
    std::vector<unsigned> block_masks;
    unsigned covered = 0;
    for (const auto& b : blocks) {
        if (b.empty())
            throw partition_error("partition has an empty block");
        unsigned mask = 0;
        for (int x : b) {
            unsigned bit = 1u << index_of(x);
            if ((mask | covered) & bit)
                throw partition_error("blocks overlap at " + std::to_string(x));
            mask |= bit;
        }
        covered |= mask;
        block_masks.push_back(mask);
    }
    const unsigned full = (1u << m) - 1;
    if (covered != full)
        throw partition_error("blocks do not cover the universe");

    const std::size_t n = std::size_t{1} << m;
    FiniteStructure s;
    for (unsigned k = 0; k < n; ++k)
        s.carrier.push_back(subset_name(universe, k));
    s.order = BinaryRelation(n);
    for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b)
            if ((a & ~b) == 0)
                s.order.set(static_cast<Element>(a), static_cast<Element>(b));
    s.parthood = s.order;
    s.constants["bot"] = 0;
    s.constants["top"] = static_cast<Element>(full);

    OpTable vee(2, n), wedge(2, n), lower(1, n), upper(1, n);
    for (unsigned a = 0; a < n; ++a) {
        for (unsigned b = 0; b < n; ++b) {
            std::vector<Element> args{static_cast<Element>(a), static_cast<Element>(b)};
            vee.set(args, static_cast<Element>(a | b));
            wedge.set(args, static_cast<Element>(a & b));
        }
        unsigned lo = 0, up = 0;
        for (unsigned blk : block_masks) {
            if ((blk & ~a) == 0)
                lo |= blk;
            if (blk & a)
                up |= blk;
        }
        lower.cells()[a] = static_cast<Element>(lo);
        upper.cells()[a] = static_cast<Element>(up);
    }
    s.ops["vee"] = vee;
    s.ops["wedge"] = wedge;
    s.lower = {lower};
    s.upper = {upper};
    return s;
}

} // namespace erc
