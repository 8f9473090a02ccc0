#pragma once

// Umbrella header: exact-arithmetic local theory of Veronese webs.

#include "veroweb/cauchy.hpp"
#include "veroweb/error.hpp"
#include "veroweb/field.hpp"
#include "veroweb/jetform.hpp"
#include "veroweb/jets.hpp"
#include "veroweb/matrix.hpp"
#include "veroweb/multivector.hpp"
#include "veroweb/pencil.hpp"
#include "veroweb/unipoly.hpp"
#include "veroweb/veronese.hpp"
#include "veroweb/webcheck.hpp"

#define VEROWEB_VERSION "0.1.0"
