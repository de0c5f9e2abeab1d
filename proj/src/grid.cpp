#include "ch/grid.hpp"
