"""Mixed-ADC massive MIMO uplink: channel estimation and spectral efficiency.

Simulation and analysis toolkit for an uplink where N of M base-station
antennas use high-resolution ADCs and the rest use one-bit ADCs: quantized
pilot reception, three LMMSE channel estimators (one-bit, round-robin
full-resolution, joint), Gamma order statistics for antenna selection, and
closed-form plus Monte Carlo spectral-efficiency evaluation for MRC and ZF
detection, driven by a figure-reproduction CLI.
"""

__version__ = "0.1.0"

from .estimation import (EstimationResult, JointWeights, Scheme,
                         TrainingObservations, estimate, estimate_fullres_rr,
                         estimate_joint, estimate_onebit, joint_weights,
                         simulate_round_robin, simulate_training)
from .montecarlo import TrialAggregate, TrialFailure, TrialPlan, run_trials, trial_rng
from .orderstats import (OrderStatSpec, QuadratureError, chi_m, chi_prefix_sum,
                         gamma_cdf, order_stat_mc_oracle, order_stat_mean)
from .quantization import (AqnmGain, BussgangModel, aqnm_alpha,
                           arcsine_covariance, arcsine_cross_covariance,
                           bussgang_model, one_bit_quantize,
                           pilot_autocorrelation, signal_autocorrelation)
from .spectral_efficiency import (CsiModel, DataPhaseModel, NumericalError,
                                  SeReport, antenna_selection, csi_model,
                                  data_phase_model, rate_wrapper,
                                  se_mrc_heterogeneous, se_mrc_mixed,
                                  se_mrc_selection, se_uniform_mrc,
                                  se_uniform_zf, sqinr_empirical, zf_detector)
from .sysmodel import (ChannelMatrix, PilotMatrix, SystemConfig, draw_channel,
                       generate_pilots, load_config, make_config, power_control)

__all__ = [name for name in dir() if not name.startswith("_")]
