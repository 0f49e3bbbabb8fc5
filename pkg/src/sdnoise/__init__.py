"""Learning binary classifiers from noisy Similar/Dissimilar pairs.

Library layout:

* data        -- datasets, pairs, synthetic generators, CSV ingestion, splits
* noise       -- the two corruption processes and their exact descriptions
* losses      -- per-example margin losses in coefficient form
* correction  -- backward loss correction (mixing matrix, corrected losses)
* weighted    -- cost-sensitive classification on noisy tags
* models      -- linear / MLP predictors, momentum SGD, gradient checks
* estimation  -- class-prior recovery and cross-validation
* baselines   -- 2-means and constraint-respecting 2-means
* experiment  -- end-to-end runs, sweeps and reports
* cli         -- command-line entry point
"""

from .backend import backend_name
from .baselines import (ClusterClassifier, Clustering, ClusteringError,
                        Constraints, clusters_to_classes, constrained_kmeans,
                        kmeans)
from .correction import (CorrectionMatrix, DegenerateRate, SingularCorrection,
                         build_T, convexity_condition, corrected_loss,
                         invert_T, make_corrected_loss)
from .data import (DataError, Dataset, PairSet, SDPoints, SplitSpec,
                   flatten_pairs, generate_gaussian_dataset, load_csv_dataset,
                   load_manifest, split, standardize)
from .estimation import (CVReport, EstimationError, PriorEstimate,
                         cross_validate, estimate_prior_from_pairs,
                         estimate_prior_labeling, estimate_prior_pairing)
from .experiment import (ExperimentSpec, RunReport, StageError, emit_report,
                         load_report, load_spec, make_noisy_pairs,
                         materialize_dataset, run, spec_from_dict,
                         sweep_noise, sweep_samples, write_plot_data)
from .losses import PerExampleLoss, plain_loss
from .models import (Predictor, TrainConfig, TrainingDiverged, TrainResult,
                     batch_gradients, forward, gradient_check, init_predictor,
                     load_predictor, save_predictor, sgd_train)
from .noise import (LabelingNoise, MixtureWeights, NoiseError, NoiseModel,
                    PairingNoise, PosteriorCoefficients, corrupt_labeling,
                    corrupt_pairing, expected_similar_fraction, modified_prior,
                    noise_from_dict, noise_to_dict,
                    noisy_similar_mixture_weights, posterior_coefficients,
                    sample_clean_pairs)
from .weighted import (DegenerateThreshold, WeightedRiskParams, classify,
                       make_weighted_loss, weighted_loss, weighted_params,
                       weighted_zero_one_risk)

__version__ = "1.0.0"

__all__ = [
    "backend_name",
    "ClusterClassifier", "Clustering", "ClusteringError", "Constraints",
    "clusters_to_classes", "constrained_kmeans", "kmeans",
    "CorrectionMatrix", "DegenerateRate", "SingularCorrection", "build_T",
    "convexity_condition", "corrected_loss", "invert_T", "make_corrected_loss",
    "DataError", "Dataset", "PairSet", "SDPoints", "SplitSpec",
    "flatten_pairs", "generate_gaussian_dataset", "load_csv_dataset",
    "load_manifest", "split", "standardize",
    "CVReport", "EstimationError", "PriorEstimate", "cross_validate",
    "estimate_prior_from_pairs", "estimate_prior_labeling",
    "estimate_prior_pairing",
    "ExperimentSpec", "RunReport", "StageError", "emit_report", "load_report",
    "load_spec", "make_noisy_pairs", "materialize_dataset", "run",
    "spec_from_dict", "sweep_noise", "sweep_samples", "write_plot_data",
    "PerExampleLoss", "plain_loss",
    "Predictor", "TrainConfig", "TrainingDiverged", "TrainResult",
    "batch_gradients", "forward", "gradient_check", "init_predictor",
    "load_predictor", "save_predictor", "sgd_train",
    "LabelingNoise", "MixtureWeights", "NoiseError", "NoiseModel",
    "PairingNoise", "PosteriorCoefficients", "corrupt_labeling",
    "corrupt_pairing", "expected_similar_fraction", "modified_prior",
    "noise_from_dict", "noise_to_dict", "noisy_similar_mixture_weights",
    "posterior_coefficients", "sample_clean_pairs",
    "DegenerateThreshold", "WeightedRiskParams", "classify",
    "make_weighted_loss", "weighted_loss", "weighted_params",
    "weighted_zero_one_risk",
]
