#include "manetsim/micro.hpp"

#include "manetsim/errors.hpp"

#include <numeric>
#include <string>

namespace manetsim {

std::uint64_t MicroResult::total_successes() const
{
    return std::accumulate(successes.begin(), successes.end(), std::uint64_t{0});
}

double MicroResult::collision_fraction() const
{
    const auto busy = cycles();
    return busy == 0 ? 0.0 : static_cast<double>(collision_slots) / static_cast<double>(busy);
}

MicroResult run_micro(const MicroConfig& cfg)
{
    if (cfg.station_count < 1 || cfg.station_count > 3) {
        throw ConfigError("station_count must be 1, 2 or 3");
    }
    if (const auto v = cfg.params.violation(); !v.empty()) {
        throw ConfigError(std::string(v));
    }

    RandomSource rng(cfg.seed);
    const auto n = static_cast<std::size_t>(cfg.station_count);
    std::vector<ContentionState> state(n, ContentionState::initial(cfg.policy, cfg.params));
    std::vector<std::int64_t> counter(n);
    for (std::size_t i = 0; i < n; ++i) {
        counter[i] = draw_backoff(state[i], rng);
    }

    MicroResult out;
    out.successes.assign(n, 0);
    out.collisions.assign(n, 0);

    std::vector<std::size_t> ready;
    for (std::uint64_t slot = 0; slot < cfg.horizon_slots; ++slot) {
        if (cfg.max_cycles != 0 && out.cycles() >= cfg.max_cycles) {
            break;
        }
        ready.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (counter[i] == 0) {
                ready.push_back(i);
            }
        }

        if (ready.empty()) {
            ++out.idle_slots;
            for (auto& c : counter) {
                --c;
            }
            continue;
        }

        // stations not transmitting keep their counters frozen
        const bool collided = ready.size() > 1;
        if (collided) {
            ++out.collision_slots;
        } else {
            ++out.success_slots;
        }
        for (auto i : ready) {
            if (collided) {
                ++out.collisions[i];
                state[i] = on_collision(state[i]);
            } else {
                ++out.successes[i];
                state[i] = on_success(state[i]);
            }
            counter[i] = draw_backoff(state[i], rng);
            if (cfg.record_trace) {
                out.cw_trace.push_back(CwSample{slot, static_cast<int>(i), state[i].cw});
            }
        }
    }
    return out;
}

}  // namespace manetsim
