#pragma once

#include "pthought/checkpoint.hpp"
#include "pthought/corpus.hpp"
#include "pthought/errors.hpp"
#include "pthought/format.hpp"
#include "pthought/gradcheck.hpp"
#include "pthought/metrics.hpp"
#include "pthought/model.hpp"
#include "pthought/numkit.hpp"
#include "pthought/optim.hpp"
#include "pthought/random.hpp"
#include "pthought/sentence_vector.hpp"
#include "pthought/sts.hpp"
#include "pthought/synthetic.hpp"
#include "pthought/train.hpp"
