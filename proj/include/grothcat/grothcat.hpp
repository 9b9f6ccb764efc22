#pragma once

#include "grothcat/algebra.hpp"
#include "grothcat/cli.hpp"
#include "grothcat/congruence.hpp"
#include "grothcat/echelon.hpp"
#include "grothcat/error.hpp"
#include "grothcat/functor_model.hpp"
#include "grothcat/grothendieck.hpp"
#include "grothcat/lincomb.hpp"
#include "grothcat/path_algebra.hpp"
#include "grothcat/presentation.hpp"
#include "grothcat/problem_io.hpp"
#include "grothcat/quiver.hpp"
#include "grothcat/report.hpp"
#include "grothcat/scalar.hpp"
