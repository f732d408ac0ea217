"""roilab: cost/benefit experiments for requirements-dependency extraction.

A small workbench that answers "how much analysis is enough": it runs
classifier and active-learning experiments over requirement-pair corpora,
prices the analysis effort, values the outcomes, and finds where the
return on investment peaks and where it breaks even.
"""

from .active import (
    ALConfig,
    ALDataset,
    IterationRecord,
    LearningRun,
    OracleSim,
    make_al_dataset,
    run_learning,
    select_batch,
    uncertainty_score,
)
from .classifiers import (
    EvalMetrics,
    ModelSpec,
    TuneResult,
    cross_validate_tune,
    evaluate,
    predict,
    predict_proba,
    train_model,
    train_nb,
    train_rf,
)
from .corpus import (
    BINARY_LABELS,
    CLASS_ORDER,
    DEPENDENT,
    INDEPENDENT,
    OTHER,
    REQUIRES,
    TERNARY_LABELS,
    DatasetSplit,
    RequirementPair,
    RequirementRecord,
    SynthConfig,
    balance_and_split,
    binary_view,
    build_pairs,
    filter_and_binarize,
    load_pairs,
    load_records,
    make_pair,
    ordered_classes,
    stratified_split,
    synth_corpus,
    write_pairs,
    write_records,
)
from .errors import (
    ConfigError,
    DataError,
    EmptyCorpusError,
    IntegrityError,
    RoilabError,
    SchemaError,
)
from .roi import (
    BenefitParams,
    CostParams,
    CurveAnalysis,
    RoiCurve,
    RoiPoint,
    analyze_curve,
    benefit_eas1,
    benefit_eas2,
    build_curve_eas1,
    build_curve_eas2,
    cost_eas1,
    cost_eas2,
    import_external_curve,
    load_params,
    roi,
    write_curve,
)
from .textprep import (
    FeatureVector,
    Vocabulary,
    build_vocab,
    default_stopwords,
    preprocess,
    suffix_stem,
    to_matrix,
    vectorize_pair,
    vectorize_pairs,
)

__version__ = "0.1.0"
