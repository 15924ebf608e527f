#pragma once

#include "pcsreg/error.hpp"
#include "pcsreg/frames.hpp"
#include "pcsreg/generator.hpp"
#include "pcsreg/geometry.hpp"
#include "pcsreg/grammar.hpp"
#include "pcsreg/optimizer.hpp"
#include "pcsreg/prepositions.hpp"
#include "pcsreg/realize.hpp"
#include "pcsreg/resolver.hpp"
#include "pcsreg/scene.hpp"
