#ifndef NILSEMI_HPP
#define NILSEMI_HPP

#include "nilsemi/decision.hpp"
#include "nilsemi/instance.hpp"
#include "nilsemi/intersect.hpp"
#include "nilsemi/linsolve.hpp"
#include "nilsemi/matlie.hpp"
#include "nilsemi/matrix.hpp"
#include "nilsemi/numfield.hpp"
#include "nilsemi/oracle.hpp"
#include "nilsemi/orbit.hpp"
#include "nilsemi/rational.hpp"
#include "nilsemi/report.hpp"
#include "nilsemi/word.hpp"

#endif // NILSEMI_HPP
