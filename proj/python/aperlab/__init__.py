# Copyright 2026 The aperlab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Almost-periodicity experiments: function zoo, windowed defects, detectors,
convolution and PDE solution operators."""

from ._aperlab import (
    CompactWindow,
    DefectResult,
    Error,
    FunctionHandle,
    Kernel,
    MetricSpec,
    Relation,
    approx_error,
    biharmonic_halfspace,
    bogolyubov_witness,
    dalembert,
    heat_apply,
    infinite_convolution,
    l1_convolution,
    lattice_distance,
    levitan_type1_candidates,
    metric,
    mod_two_pi_distance,
    run_cli,
    scan_almost_periods,
    set_thread_count,
    windowed_defect,
    zoo,
)

__version__ = "0.1.0"
