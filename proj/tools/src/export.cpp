#include <cstdio>
#include <sstream>

#include "lagbill/integrals.hpp"
#include "lagbill_app/run.hpp"

namespace lagbill::app {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void columns(std::ostringstream& os, const char* prefix, int count) {
  for (int i = 1; i <= count; ++i) os << ',' << prefix << i;
}

void values(std::ostringstream& os, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << format_double(v[i]);
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const std::vector<FirstIntegral>& integrals) {
  std::ostringstream os;
  const int m = traj.space.n + 1;
  os << 't';
  columns(os, "q", m);
  columns(os, "v", m);
  for (const FirstIntegral& F : integrals) os << ',' << F.name();
  os << ",event\n";
  for (const Sample& s : traj.samples) {
    os << format_double(s.t);
    values(os, s.q);
    values(os, s.v);
    for (const FirstIntegral& F : integrals) {
      double val;
      try {
        val = F(s.state());
      } catch (const SingularityError&) {
        val = std::numeric_limits<double>::quiet_NaN();
      }
      os << ',' << format_double(val);
    }
    os << ',' << s.event << '\n';
  }
  return os.str();
}

std::string events_csv(const Trajectory& traj) {
  std::ostringstream os;
  const int m = traj.space.n + 1;
  os << "index,t,wall";
  columns(os, "q", m);
  columns(os, "v_in", m);
  columns(os, "v_out", m);
  os << '\n';
  for (std::size_t k = 0; k < traj.events.size(); ++k) {
    const ReflectionEvent& e = traj.events[k];
    os << k << ',' << format_double(e.t_hit) << ',' << e.wall_id;
    values(os, e.q_hit);
    values(os, e.v_in);
    values(os, e.v_out);
    os << '\n';
  }
  return os.str();
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lagbill::app
