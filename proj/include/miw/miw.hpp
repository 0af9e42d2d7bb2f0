#pragma once

#include <miw/config.hpp>
#include <miw/coupling.hpp>
#include <miw/error.hpp>
#include <miw/io.hpp>
#include <miw/radial.hpp>
#include <miw/rates.hpp>
#include <miw/specfn.hpp>
#include <miw/stein.hpp>
#include <miw/target.hpp>
#include <miw/wasser.hpp>
