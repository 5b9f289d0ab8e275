#pragma once

#include "epic/bench.hpp"
#include "epic/core.hpp"
#include "epic/engine.hpp"
#include "epic/errors.hpp"
#include "epic/gateway.hpp"
#include "epic/lexicon.hpp"
#include "epic/mutation.hpp"
#include "epic/rng.hpp"
#include "epic/sandbox.hpp"
#include "epic/strings.hpp"
