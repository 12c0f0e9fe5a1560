#pragma once

#include "creaturekit/error.hpp"
#include "creaturekit/partial_fn.hpp"
#include "creaturekit/norm.hpp"
#include "creaturekit/hall.hpp"
#include "creaturekit/creature.hpp"
#include "creaturekit/tree_creature.hpp"
#include "creaturekit/systems.hpp"
#include "creaturekit/fc_order.hpp"
#include "creaturekit/measured_tree.hpp"
#include "creaturekit/tree_candidate.hpp"
#include "creaturekit/audit.hpp"
