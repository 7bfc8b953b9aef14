#pragma once

#include "tunit/assertions.hpp"
#include "tunit/cdmodel.hpp"
#include "tunit/error.hpp"
#include "tunit/java.hpp"
#include "tunit/mocks.hpp"
#include "tunit/runner.hpp"
#include "tunit/template.hpp"
