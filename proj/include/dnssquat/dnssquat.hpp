#ifndef DNSSQUAT_DNSSQUAT_HPP
#define DNSSQUAT_DNSSQUAT_HPP

#include "dnssquat/analytics.hpp"
#include "dnssquat/cluster.hpp"
#include "dnssquat/common.hpp"
#include "dnssquat/config.hpp"
#include "dnssquat/evaluate.hpp"
#include "dnssquat/features.hpp"
#include "dnssquat/ingest.hpp"
#include "dnssquat/learners/ensemble.hpp"
#include "dnssquat/model_io.hpp"
#include "dnssquat/reputation.hpp"
#include "dnssquat/synthetic.hpp"

#endif  // DNSSQUAT_DNSSQUAT_HPP
