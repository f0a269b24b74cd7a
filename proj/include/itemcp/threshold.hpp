#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace itemcp {

/// Minimum frequency as an exact fraction num/den in (0, 1].
///
/// Feasibility is always decided by cross-multiplication, never by a
/// floating-point comparison.
class Threshold {
public:
    Threshold() = default;
    Threshold(std::uint64_t num, std::uint64_t den);

    /// Parses "1/2", "50%", "0.5" or "1".
    static Threshold parse(std::string_view text);

    std::uint64_t num() const { return num_; }
    std::uint64_t den() const { return den_; }

    /// support / active >= num / den
    bool admits(std::uint64_t support, std::uint64_t active) const {
        return support * den_ >= num_ * active;
    }

    std::string str() const;

    friend bool operator==(const Threshold&, const Threshold&) = default;

private:
    std::uint64_t num_ = 1;
    std::uint64_t den_ = 1;
};

}  // namespace itemcp
