#pragma once

#include "averaging.hpp"
#include "covering.hpp"
#include "examples.hpp"
#include "extension.hpp"
#include "instances.hpp"
#include "maharam.hpp"
#include "partial_bijection.hpp"
#include "point_space.hpp"
#include "prng.hpp"
#include "rational.hpp"
#include "relation.hpp"
#include "serialize.hpp"
#include "subset_family.hpp"
#include "subset_function.hpp"
#include "weights.hpp"
#include "words.hpp"
