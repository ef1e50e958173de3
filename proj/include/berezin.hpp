#ifndef BEREZIN_HPP
#define BEREZIN_HPP

#include "berezin/core.hpp"
#include "berezin/geometry.hpp"
#include "berezin/groups.hpp"
#include "berezin/quadrature.hpp"
#include "berezin/bergman.hpp"
#include "berezin/symbols.hpp"
#include "berezin/repn.hpp"
#include "berezin/modular.hpp"
#include "berezin/equivariant.hpp"
#include "berezin/cocycles.hpp"

#endif
