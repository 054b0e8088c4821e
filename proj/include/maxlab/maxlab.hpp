// Umbrella header.
#pragma once

#include "core.hpp"
#include "geometry.hpp"
#include "tensorcalc.hpp"
#include "modes.hpp"
#include "evolution.hpp"
#include "diagnostics.hpp"
#include "zeroresolvent.hpp"
#include "identities.hpp"
#include "config.hpp"
#include "playbook.hpp"
