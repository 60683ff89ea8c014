#pragma once

#include "gcell/spec.hpp"
#include "gcell/labels.hpp"
#include "gcell/connection.hpp"
#include "gcell/topology.hpp"
#include "gcell/routing.hpp"
#include "gcell/proxy.hpp"
#include "gcell/harness.hpp"
