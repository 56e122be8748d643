#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace marl_lob {

using AgentId = std::int32_t;
using OrderId = std::uint64_t;
using Volume = std::int64_t;
/// Event-sequence number. Strictly increasing across accepted orders.
using Seq = std::int64_t;

inline constexpr AgentId kNoAgent = -1;

enum class Side : std::uint8_t { Bid, Ask };

/// Buy aggressor lifts asks, sell aggressor hits bids.
inline constexpr Side opposite(Side s) noexcept { return s == Side::Bid ? Side::Ask : Side::Bid; }

inline constexpr int sign(Side s) noexcept { return s == Side::Bid ? +1 : -1; }

inline constexpr char side_code(Side s) noexcept { return s == Side::Bid ? 'B' : 'S'; }

/// Integer tick price. Tick size is one simulation unit.
struct Price {
    std::int64_t ticks = 0;

    constexpr Price() = default;
    constexpr explicit Price(std::int64_t t) : ticks(t) {}

    constexpr double as_double() const noexcept { return static_cast<double>(ticks); }

    friend constexpr auto operator<=>(Price, Price) = default;
    friend constexpr Price operator+(Price p, std::int64_t d) { return Price{p.ticks + d}; }
    friend constexpr Price operator-(Price p, std::int64_t d) { return Price{p.ticks - d}; }
    friend constexpr std::int64_t operator-(Price a, Price b) { return a.ticks - b.ticks; }
};

}  // namespace marl_lob
