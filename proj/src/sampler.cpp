#include "rotodeg/sampler.hpp"

#include <bit>
#include <cstdint>
#include <functional>

namespace rotodeg {

std::size_t FlowSampler::KeyHash::operator()(const Key &k) const noexcept {
    const auto a = std::bit_cast<std::uint64_t>(k.x);
    const auto b = std::bit_cast<std::uint64_t>(k.y);
    return std::hash<std::uint64_t>{}(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

FlowSampler::FlowSampler(TimeVaryingField field, IntegratorConfig cfg) : field_(std::move(field)), cfg_(cfg) {
    cfg_.validate();
}

const FlowSampler::Entry &FlowSampler::entry(const Vec2 &x) {
    const Key key{x.x(), x.y()};
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    const Trajectory traj = evolve(field_, x, field_.period_T, cfg_);
    Entry e{traj.points.back() - x, std::nullopt, nullptr};
    try {
        const LiftedPath path = lift_trajectory(field_, traj, cfg_);
        e.F = Vec2(path.theta.back() - path.theta.front(), path.r.back() - path.r.front());
    } catch (const OriginCrossing &) {
        e.lift_error = std::current_exception();
    } catch (const RefinementLimit &) {
        e.lift_error = std::current_exception();
    }
    std::lock_guard lock(mutex_);
    // References into an unordered_map stay valid across rehashing.
    return cache_.try_emplace(key, std::move(e)).first->second;
}

Vec2 FlowSampler::f(const Vec2 &x) { return entry(x).f; }

Vec2 FlowSampler::F(const Vec2 &x) {
    const Entry &e = entry(x);
    if (!e.F) std::rethrow_exception(e.lift_error);
    return *e.F;
}

std::size_t FlowSampler::evaluations() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

}  // namespace rotodeg
