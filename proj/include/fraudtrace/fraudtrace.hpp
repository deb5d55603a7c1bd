#pragma once

#include "fraudtrace/attribute.hpp"
#include "fraudtrace/benchmark.hpp"
#include "fraudtrace/classify.hpp"
#include "fraudtrace/common.hpp"
#include "fraudtrace/config.hpp"
#include "fraudtrace/corpus.hpp"
#include "fraudtrace/detect.hpp"
#include "fraudtrace/dsg.hpp"
#include "fraudtrace/embed.hpp"
#include "fraudtrace/graph.hpp"
#include "fraudtrace/mcdense.hpp"
#include "fraudtrace/metrics.hpp"
#include "fraudtrace/min_cut.hpp"
#include "fraudtrace/pipeline.hpp"
#include "fraudtrace/stylo.hpp"
#include "fraudtrace/synth.hpp"
#include "fraudtrace/text.hpp"
