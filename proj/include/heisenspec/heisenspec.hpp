#pragma once

#include "version.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "group.hpp"
#include "conditions.hpp"
#include "kernel.hpp"
#include "spectrum.hpp"
#include "weyl.hpp"
#include "mellin.hpp"
#include "nilmanifold.hpp"
#include "io.hpp"
#include "cli.hpp"
