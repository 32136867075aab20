#ifndef OLCACHE_OLCACHE_HPP
#define OLCACHE_OLCACHE_HPP

#include "olcache/bounds.hpp"
#include "olcache/config.hpp"
#include "olcache/core_model.hpp"
#include "olcache/error.hpp"
#include "olcache/generators.hpp"
#include "olcache/harness.hpp"
#include "olcache/policies.hpp"
#include "olcache/regret.hpp"
#include "olcache/trace.hpp"

#endif  // OLCACHE_OLCACHE_HPP
