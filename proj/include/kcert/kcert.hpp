#pragma once

#include "kcert/applications.hpp"
#include "kcert/bounds.hpp"
#include "kcert/challenge.hpp"
#include "kcert/checkpoint.hpp"
#include "kcert/dense.hpp"
#include "kcert/errors.hpp"
#include "kcert/field.hpp"
#include "kcert/ledger.hpp"
#include "kcert/logdepth.hpp"
#include "kcert/outcome.hpp"
#include "kcert/polynomial.hpp"
#include "kcert/protocol.hpp"
#include "kcert/prover.hpp"
#include "kcert/recursive.hpp"
#include "kcert/sequence.hpp"
#include "kcert/session.hpp"
#include "kcert/sha256.hpp"
#include "kcert/sparse_matrix.hpp"
#include "kcert/transcript.hpp"
