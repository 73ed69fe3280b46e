#pragma once

#include <stdexcept>
#include <string>

namespace leoisl {

enum class Err {
  config,
  domain,
  index,
  degenerate_pair,
  singular,
  pulse_model,
  allocation,
  undefined_fairness,
  infeasible,
  search_aborted,
  shape,
  io,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(Err kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Err kind() const { return kind_; }

private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& what) { throw Error(kind, what); }

}  // namespace leoisl
