#pragma once

#include "ncg/bulkedge.hpp"
#include "ncg/config.hpp"
#include "ncg/cyclic.hpp"
#include "ncg/error.hpp"
#include "ncg/geometry.hpp"
#include "ncg/ktheory.hpp"
#include "ncg/models.hpp"
#include "ncg/operator_core.hpp"
#include "ncg/pairings.hpp"
#include "ncg/selftest.hpp"
