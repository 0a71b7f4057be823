/*
 *   Copyright 2026 The cnas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Portable seeded randomness.
 *
 * All sampling goes through std::mt19937_64, whose output sequence is fixed by
 * the C++ standard. The standard distributions are not portable, so integer
 * and real draws are derived from the raw 64-bit words here.
 *
 * Stream splitting: a child stream for (seed, tag, index...) is seeded with
 * derive_seed(seed, tag, index...), a chain of SplitMix64 mixes. Sequential
 * generators (one graph) use one Rng; per-vertex decisions that must not
 * depend on visiting order use keyed_uniform(), which is a pure function of
 * its key.
 */

#ifndef CNAS_RNG_HPP
#define CNAS_RNG_HPP

#include <cstdint>
#include <random>

namespace cnas {

/** SplitMix64 finalizer. */
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed) noexcept { return seed; }

/** Seed of the child stream identified by the given key path. */
template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key, Keys... rest) noexcept {
	return derive_seed(mix64(seed ^ mix64(key + 0x632be59bd9b4e019ULL)),
	                   static_cast<std::uint64_t>(rest)...);
}

/** Maps a 64-bit word onto [0, 1) with 53 bits of resolution. */
constexpr double to_unit_interval(std::uint64_t x) noexcept {
	return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/** Order-independent uniform draw in [0, 1) for a key path. */
template <typename... Keys>
constexpr double keyed_uniform(std::uint64_t seed, Keys... keys) noexcept {
	return to_unit_interval(mix64(derive_seed(seed, static_cast<std::uint64_t>(keys)...)));
}

/** Stream tags used with derive_seed. */
namespace stream {
inline constexpr std::uint64_t kGraph = 1;
inline constexpr std::uint64_t kStaging = 2;
inline constexpr std::uint64_t kPartition = 3;
inline constexpr std::uint64_t kSample = 4;
inline constexpr std::uint64_t kStage = 5;
}  // namespace stream

class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	std::uint64_t next() { return engine_(); }

	double uniform() { return to_unit_interval(engine_()); }

	bool bernoulli(double p) { return uniform() < p; }

	/** Unbiased integer in [0, bound); bound must be positive. */
	std::uint64_t below(std::uint64_t bound) {
		const std::uint64_t threshold = (0 - bound) % bound;
		for (;;) {
			const std::uint64_t r = engine_();
			if (r >= threshold) {
				return r % bound;
			}
		}
	}

private:
	std::mt19937_64 engine_;
};

}  // namespace cnas

#endif  // CNAS_RNG_HPP
