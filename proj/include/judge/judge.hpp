#pragma once

#include "judge/allotax.hpp"
#include "judge/awry.hpp"
#include "judge/classifier.hpp"
#include "judge/corpus.hpp"
#include "judge/csv.hpp"
#include "judge/demographics.hpp"
#include "judge/error.hpp"
#include "judge/evaluation.hpp"
#include "judge/external.hpp"
#include "judge/labels.hpp"
#include "judge/logreg.hpp"
#include "judge/naive_bayes.hpp"
#include "judge/report.hpp"
#include "judge/rng.hpp"
#include "judge/stats.hpp"
#include "judge/text.hpp"
#include "judge/valence_analytics.hpp"
