#pragma once

#include <exception>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "rotodeg/flow.hpp"

namespace rotodeg {

/// Memoizes f_T and F_T at plane points for one field. Every point is
/// integrated once; f_T stays available when the lift fails (the point
/// belongs to the null set), in which case F_T rethrows the lift error.
/// Thread-safe.
class FlowSampler {
  public:
    FlowSampler(TimeVaryingField field, IntegratorConfig cfg);

    [[nodiscard]] const TimeVaryingField &field() const noexcept { return field_; }
    [[nodiscard]] const IntegratorConfig &config() const noexcept { return cfg_; }

    Vec2 f(const Vec2 &x);
    Vec2 F(const Vec2 &x);
    double rotation(const Vec2 &x) { return F(x).x() / kTwoPi; }

    [[nodiscard]] std::size_t evaluations() const;

  private:
    struct Key {
        double x, y;
        bool operator==(const Key &o) const { return x == o.x && y == o.y; }
    };
    struct KeyHash {
        std::size_t operator()(const Key &k) const noexcept;
    };
    struct Entry {
        Vec2 f;
        std::optional<Vec2> F;
        std::exception_ptr lift_error;
    };

    const Entry &entry(const Vec2 &x);

    TimeVaryingField field_;
    IntegratorConfig cfg_;
    mutable std::mutex mutex_;
    std::unordered_map<Key, Entry, KeyHash> cache_;
};

}  // namespace rotodeg
