#ifndef JOINTSLAB_JSON_IO_HPP
#define JOINTSLAB_JSON_IO_HPP

#include <json.hpp>

#include "jointslab/config.hpp"
#include "jointslab/poly.hpp"
#include "jointslab/real.hpp"
#include "jointslab/setsys.hpp"

namespace jointslab {

using json = nlohmann::json;

json field_to_json(const Field& f);
Field field_from_json(const json& j);

json config_to_json(const JointsConfiguration& cfg);
JointsConfiguration config_from_json(const json& j);

json system_to_json(const JointSetSystem& sys);
JointSetSystem system_from_json(const json& j);

// [{"exp": [...], "coef": "..."}]
json poly_to_json(const MultiPoly& f);
MultiPoly poly_from_json(const json& j, Field f, std::size_t dim);

// "a/b", or "a" for integers.
std::string rational_string(const mpq_class& q);
mpq_class parse_rational(const std::string& text);
json rationals_to_json(const std::vector<mpq_class>& v);
// Number rounded to 12 significant digits.
json real_to_json(const Real& x);

}  // namespace jointslab

#endif
