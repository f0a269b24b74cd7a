#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace itemcp {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

inline Bitset make_bitset(std::size_t size, const std::vector<int>& members) {
    Bitset b(size);
    for (int i : members) b.set(static_cast<std::size_t>(i));
    return b;
}

inline std::vector<int> to_indices(const Bitset& b) {
    std::vector<int> out;
    out.reserve(b.count());
    for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i))
        out.push_back(static_cast<int>(i));
    return out;
}

// |a & b| without materializing the intersection.
inline std::size_t intersection_count(const Bitset& a, const Bitset& b) {
    Bitset tmp = a;
    tmp &= b;
    return tmp.count();
}

}  // namespace itemcp
