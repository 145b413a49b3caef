# Copyright 2026 The nbmine Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Model-based frequent itemset mining with a negative binomial baseline."""

from ._nbmine import (
    ConvergenceError,
    Error,
    GenConfig,
    GroundTruth,
    IoError,
    MinedItemset,
    MiningAborted,
    NBParams,
    ParseError,
    TransactionDatabase,
    UnderdispersionError,
    __version__,
    all_confidence,
    find_threshold,
    fit,
    fit_moments,
    generate,
    gof_chi2,
    mine,
    mine_allconf,
    mine_support,
    nb_pmf,
    nb_pmf_prefix,
    nb_tail,
    predicted_precision,
    score,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
