#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>

#include <boost/container/small_vector.hpp>

namespace pdmp {

enum class StateTag { interior, boundary, cemetery };

using Coords = boost::container::small_vector<double, 2>;

// A point of E, of the exit boundary, or the cemetery.
struct State {
  StateTag tag = StateTag::interior;
  Coords coords;
  std::optional<int> label;

  static State interior(std::initializer_list<double> xs, std::optional<int> label = std::nullopt) {
    return State{StateTag::interior, Coords(xs), label};
  }
  static State interior(Coords xs, std::optional<int> label = std::nullopt) {
    return State{StateTag::interior, std::move(xs), label};
  }
  static State labelled(int label) { return State{StateTag::interior, {}, label}; }
  static State boundary(Coords xs, std::optional<int> label = std::nullopt) {
    return State{StateTag::boundary, std::move(xs), label};
  }
  static State cemetery() { return State{StateTag::cemetery, {}, std::nullopt}; }

  bool is_cemetery() const noexcept { return tag == StateTag::cemetery; }
  bool is_boundary() const noexcept { return tag == StateTag::boundary; }

  // First coordinate; most bundled models are one dimensional.
  double x() const { return coords.at(0); }

  friend bool operator==(const State& a, const State& b) {
    return a.tag == b.tag && a.label == b.label && a.coords == b.coords;
  }
};

// Largest absolute coordinate difference; infinite when tags or labels differ.
double state_distance(const State& a, const State& b);

std::ostream& operator<<(std::ostream& os, const State& s);

}  // namespace pdmp
