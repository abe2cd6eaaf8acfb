// Convenience include for the whole library.
#pragma once

#include "ballots.hpp"
#include "election_io.hpp"
#include "bravo.hpp"
#include "macro.hpp"
#include "assertions.hpp"
#include "plans.hpp"
#include "raire.hpp"
#include "error_model.hpp"
#include "simulate.hpp"
#include "report.hpp"
