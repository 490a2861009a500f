#pragma once

#include <utility>
#include <variant>

namespace fvault {

/// Either a value or a failure description. T and E must differ.
template <class T, class E>
class Outcome {
 public:
  Outcome(T value) : v_(std::in_place_index<0>, std::move(value)) {}  // NOLINT
  Outcome(E error) : v_(std::in_place_index<1>, std::move(error)) {}  // NOLINT

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  // Both accessors throw std::bad_variant_access on the wrong alternative.
  const T& value() const { return std::get<0>(v_); }
  T& value() { return std::get<0>(v_); }
  const E& error() const { return std::get<1>(v_); }

  const T* operator->() const { return &value(); }
  const T& operator*() const { return value(); }

 private:
  std::variant<T, E> v_;
};

}  // namespace fvault
