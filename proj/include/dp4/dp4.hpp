#pragma once

#include "dp4/arith.hpp"
#include "dp4/binary_form.hpp"
#include "dp4/brauer.hpp"
#include "dp4/certificate.hpp"
#include "dp4/config.hpp"
#include "dp4/constructor.hpp"
#include "dp4/errors.hpp"
#include "dp4/integer.hpp"
#include "dp4/local.hpp"
#include "dp4/moduli.hpp"
#include "dp4/selfcheck.hpp"
#include "dp4/surface.hpp"
