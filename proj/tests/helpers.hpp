#pragma once

#include <functional>

#include "perception/errors.hpp"

// Kind of the perception::Error thrown by f, or nullopt-like -1 if none.
inline int error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const perception::Error& e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

#define CHECK_ERROR_KIND(expr, kind) CHECK(error_kind([&] { (void)(expr); }) == static_cast<int>(kind))
