#ifndef NILSEMI_LINSOLVE_HPP
#define NILSEMI_LINSOLVE_HPP

#include "nilsemi/linsolve/cone.hpp"
#include "nilsemi/linsolve/hnf.hpp"
#include "nilsemi/linsolve/ilp.hpp"
#include "nilsemi/linsolve/linear.hpp"
#include "nilsemi/linsolve/simplex.hpp"

#endif // NILSEMI_LINSOLVE_HPP
