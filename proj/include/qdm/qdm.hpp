#pragma once

#include "qdm/cohomology.hpp"
#include "qdm/dmodule.hpp"
#include "qdm/givental.hpp"
#include "qdm/io.hpp"
#include "qdm/laurent.hpp"
#include "qdm/linalg.hpp"
#include "qdm/loop_model.hpp"
#include "qdm/rational.hpp"
#include "qdm/toric.hpp"
