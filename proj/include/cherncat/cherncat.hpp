#pragma once

#include "cherncat/algebra.hpp"
#include "cherncat/category.hpp"
#include "cherncat/cochain.hpp"
#include "cherncat/cyclic.hpp"
#include "cherncat/errors.hpp"
#include "cherncat/fredholm.hpp"
#include "cherncat/homotopy.hpp"
#include "cherncat/linalg.hpp"
#include "cherncat/omega.hpp"
#include "cherncat/parallel.hpp"
#include "cherncat/scenario.hpp"
