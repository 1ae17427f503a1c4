/// \file fmcf.hpp
/// \brief Everything in one include.

#ifndef FMCF_FMCF_HPP
#define FMCF_FMCF_HPP

#include "errors.hpp"
#include "jet.hpp"
#include "reduce.hpp"
#include "hyp_base.hpp"
#include "ambient.hpp"
#include "graph_geometry.hpp"
#include "comparison_ode.hpp"
#include "identity_lab.hpp"
#include "flow_engine.hpp"
#include "cli_io.hpp"

#endif  // FMCF_FMCF_HPP
