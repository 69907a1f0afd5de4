#include "awopt/envs/env.hpp"

#include "awopt/envs/nav_env.hpp"
#include "awopt/envs/reach_env.hpp"
#include "awopt/errors.hpp"

namespace awopt::envs {

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "nav") return std::make_unique<NavEnv>();
  if (name == "reach") return std::make_unique<ReachEnv>();
  throw ConfigError("unknown env '" + name + "'");
}

}  // namespace awopt::envs
