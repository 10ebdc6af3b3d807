"""Fixed system prompts for the three training stages.

The supervised stage uses a plain assistant prompt. The cold-start and policy
optimization stages share a structured prompt that walks the model through a
five-step spatial reasoning routine and pins the machine-parsable response
skeleton (thinking/answer tags plus bracketed Camera Center / Object Center
coordinate lines) that the response parser and reward scoring rely on.
"""

SFT_PROMPT = "You are a helpful assistant."

_FIVE_STEP_GUIDELINE = """\
Work through the question in five steps inside the <thinking> block:
Step 1 - Objective and time anchors: restate what the question asks and lock the start \
frame and end frame it refers to.
Step 2 - Start-frame 3D state: describe the scene at the start frame and anchor it \
numerically by emitting the lines
Camera Center:[x, y, z]
Object Center:[x, y, z]
with world-frame coordinates in meters.
Step 3 - Motion evidence: explain how the view changes between the two frames (scale \
change, parallax, perspective shift) and what camera or object motion that implies.
Step 4 - End-frame 3D state: describe the scene at the end frame and anchor it with a \
second Camera Center:[x, y, z] and Object Center:[x, y, z] line; check the pair of \
states is consistent with the motion from Step 3.
Step 5 - Synthesis: combine the anchored states and the motion evidence into a final \
estimate and choose the option that matches it.

Then give only the chosen option inside the <answer> block. The response must be \
exactly:
<thinking>...</thinking>
<answer>final answer</answer>"""

COLDSTART_PROMPT = (
    "You are a meticulous spatial reasoning assistant. Given video frames and a "
    "question about how the camera and objects move in 3D space over time, produce a "
    "worked reasoning trace that a student model can learn from.\n\n"
    + _FIVE_STEP_GUIDELINE
)

GRPO_PROMPT = (
    "You are a spatial reasoning assistant. Analyze the video frames and answer the "
    "question about how the camera and objects move in 3D space over time.\n\n"
    + _FIVE_STEP_GUIDELINE
)

_STAGE_PROMPTS = {"sft": SFT_PROMPT, "coldstart": COLDSTART_PROMPT, "grpo": GRPO_PROMPT}


def emit_prompts(stage: str) -> str:
    """Prompt text for a training stage: "sft", "coldstart", or "grpo"."""
    try:
        return _STAGE_PROMPTS[stage]
    except KeyError:
        raise ValueError(f"unknown stage {stage!r}; expected one of {sorted(_STAGE_PROMPTS)}")
