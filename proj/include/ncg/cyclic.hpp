#pragma once

#include "ncg/chains.hpp"
#include "ncg/cochain.hpp"
#include "ncg/crossed.hpp"
#include "ncg/graded.hpp"
