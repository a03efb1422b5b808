#pragma once
#include "pathuq/cgf.hpp"

namespace pathuq::cgf {

// Long-time CGF limit of the centered time-averaged queue length of an
// M/M/inf queue with arrival rate `arrival` and service rate `service`:
//   Lambda(c) = arrival c^2 / (service^2 (1 - c/service)),  c < service.
struct QueueCgfLimit {
  double arrival;  // > 0
  double service;  // > 0
};

double queue_cgf_limit(const QueueCgfLimit& q, double c);

// Handle with c_max = service; the limit CGF is centered by construction.
bounds::CgfHandle queue_cgf_handle(const QueueCgfLimit& q);

}  // namespace pathuq::cgf
