from coopkitchen.tom.params import (
    PARAM_FIELDS,
    ToMParams,
    load_params_file,
    max_capability_params,
    mle_like_params,
    parse_params_text,
    preset_names,
    preset_params,
    validation_preset_names,
)
from coopkitchen.tom.agent import (
    STUCK_WINDOW,
    THINK_TICKS,
    PerceivedPartnerTask,
    ToMState,
    infer_partner_task,
    predict_partner_cells,
    tom_act,
)

__all__ = [
    "PARAM_FIELDS",
    "PerceivedPartnerTask",
    "STUCK_WINDOW",
    "THINK_TICKS",
    "ToMParams",
    "ToMState",
    "infer_partner_task",
    "load_params_file",
    "max_capability_params",
    "mle_like_params",
    "parse_params_text",
    "predict_partner_cells",
    "preset_names",
    "preset_params",
    "tom_act",
    "validation_preset_names",
]
