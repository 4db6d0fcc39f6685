#pragma once

#include "formula.hpp"
#include "syntax.hpp"
#include "saturation.hpp"
#include "windows.hpp"
#include "trace.hpp"
#include "kripke.hpp"
#include "countermodel.hpp"
#include "engine.hpp"
#include "oracle.hpp"
#include "checks.hpp"
