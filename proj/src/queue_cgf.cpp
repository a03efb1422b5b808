#include "pathuq/queue_cgf.hpp"

#include <limits>

#include "pathuq/errors.hpp"

namespace pathuq::cgf {

double queue_cgf_limit(const QueueCgfLimit& q, double c) {
  if (!(q.arrival > 0.0) || !(q.service > 0.0))
    raise(ErrorKind::invalid_argument, "queue rates must be positive");
  if (c >= q.service) return std::numeric_limits<double>::infinity();
  return q.arrival * c * c / (q.service * q.service * (1.0 - c / q.service));
}

bounds::CgfHandle queue_cgf_handle(const QueueCgfLimit& q) {
  bounds::CgfHandle h;
  h.eval = [q](double c) { return queue_cgf_limit(q, c); };
  h.c_max = q.service;
  h.centered = true;
  return h;
}

}  // namespace pathuq::cgf
