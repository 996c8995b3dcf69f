#pragma once

#include "vcantor/assembly.hpp"
#include "vcantor/catalog.hpp"
#include "vcantor/eigensolve.hpp"
#include "vcantor/error.hpp"
#include "vcantor/io.hpp"
#include "vcantor/measure.hpp"
#include "vcantor/random.hpp"
#include "vcantor/spectral.hpp"
#include "vcantor/version.hpp"
#include "vcantor/vtree.hpp"
