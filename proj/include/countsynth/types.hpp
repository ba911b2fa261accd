#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace countsynth {

// The two players: EGO is the system under synthesis, ADV its environment.
enum class Player : uint8_t { Ego, Adv };

inline Player opponent(Player p) { return p == Player::Ego ? Player::Adv : Player::Ego; }

inline const char* player_name(Player p) { return p == Player::Ego ? "ego" : "adv"; }

// Dense state index within a game graph.
using StateId = uint32_t;

// A set of action letters, one bit per letter of the global letter table.
// The empty set is a legal move (the player plays none of its letters).
using ActionSet = uint32_t;

inline constexpr uint32_t kMaxLetters = 32;
inline constexpr StateId kNoState = UINT32_MAX;

// Raised for malformed inputs: files, formulas, parameter combinations.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operation is applied in a state it does not support.
struct StateError : std::runtime_error {
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace countsynth
