"""
Layer-by-layer model descriptions and their build-time shape algebra.
"""

from typing import Annotated, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from quantum.qnode import QNodeConfig
from .functional import ShapeError, conv_output_size, pool_output_size

CLASSICAL_CNN = "classical-cnn"
QNN4EO = "qnn4eo"
VARIANTS = (CLASSICAL_CNN, QNN4EO)

DEFAULT_IMAGE_SIZE = 64
DEFAULT_CHANNELS = 3
NUM_CLASSES = 2


class ModelSpecError(ValueError):
    pass


class _Layer(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class Conv2dSpec(_Layer):
    kind: Literal["Conv2d"] = "Conv2d"
    in_ch: int = Field(gt=0)
    out_ch: int = Field(gt=0)
    kernel: int = Field(gt=0)
    stride: int = Field(default=1, gt=0)
    padding: int = Field(default=0, ge=0)


class ReLUSpec(_Layer):
    kind: Literal["ReLU"] = "ReLU"


class MaxPool2dSpec(_Layer):
    kind: Literal["MaxPool2d"] = "MaxPool2d"
    kernel: int = Field(default=2, gt=0)
    stride: int = Field(default=2, gt=0)


class FlattenSpec(_Layer):
    kind: Literal["Flatten"] = "Flatten"


class LinearSpec(_Layer):
    kind: Literal["Linear"] = "Linear"
    in_features: int = Field(gt=0)
    out_features: int = Field(gt=0)


class QuantumNodeSpec(_Layer):
    kind: Literal["QuantumNode"] = "QuantumNode"
    qnode: QNodeConfig = QNodeConfig()


class LogSoftmaxSpec(_Layer):
    kind: Literal["LogSoftmax"] = "LogSoftmax"


LayerSpec = Annotated[
    Union[Conv2dSpec, ReLUSpec, MaxPool2dSpec, FlattenSpec, LinearSpec, QuantumNodeSpec, LogSoftmaxSpec],
    Field(discriminator="kind"),
]


class ModelSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["classical-cnn", "qnn4eo"]
    layers: List[LayerSpec]
    input_shape: Tuple[int, int, int] = (DEFAULT_CHANNELS, DEFAULT_IMAGE_SIZE, DEFAULT_IMAGE_SIZE)

    @model_validator(mode="after")
    def _check_variant(self):
        nodes = [i for i, layer in enumerate(self.layers) if layer.kind == "QuantumNode"]
        if self.variant == CLASSICAL_CNN and nodes:
            raise ValueError("classical-cnn must not contain a QuantumNode")
        if self.variant == QNN4EO and len(nodes) != 1:
            raise ValueError(f"qnn4eo needs exactly one QuantumNode, found {len(nodes)}")
        return self

    def quantum_node_index(self) -> Optional[int]:
        for i, layer in enumerate(self.layers):
            if layer.kind == "QuantumNode":
                return i
        return None


def _next_shape(layer, shape: Tuple[int, ...]) -> Tuple[int, ...]:
    kind = layer.kind
    if kind == "Conv2d":
        if len(shape) != 3 or shape[0] != layer.in_ch:
            raise ModelSpecError(f"Conv2d expects ({layer.in_ch}, H, W), got {shape}")
        try:
            h = conv_output_size(shape[1], layer.kernel, layer.stride, layer.padding)
            w = conv_output_size(shape[2], layer.kernel, layer.stride, layer.padding)
        except ShapeError as e:
            raise ModelSpecError(str(e)) from e
        return (layer.out_ch, h, w)
    if kind == "MaxPool2d":
        if len(shape) != 3:
            raise ModelSpecError(f"MaxPool2d expects (C, H, W), got {shape}")
        try:
            h = pool_output_size(shape[1], layer.kernel, layer.stride)
            w = pool_output_size(shape[2], layer.kernel, layer.stride)
        except ShapeError as e:
            raise ModelSpecError(str(e)) from e
        return (shape[0], h, w)
    if kind == "Flatten":
        size = 1
        for dim in shape:
            size *= dim
        return (size,)
    if kind == "Linear":
        if shape != (layer.in_features,):
            raise ModelSpecError(f"Linear expects ({layer.in_features},), got {shape}")
        return (layer.out_features,)
    if kind == "QuantumNode":
        if shape != (1,):
            raise ModelSpecError(f"QuantumNode input width must be 1, got {shape}")
        return shape
    # ReLU, LogSoftmax keep the shape
    return shape


def infer_shapes(spec: ModelSpec, input_shape: Optional[Sequence[int]] = None) -> List[Tuple[int, ...]]:
    """Per-sample shape after every layer; raises ModelSpecError on any mismatch.

    The first entry is the input shape itself.
    """
    shape = tuple(input_shape or spec.input_shape)
    shapes = [shape]
    for layer in spec.layers:
        shape = _next_shape(layer, shape)
        shapes.append(shape)
    if shapes[-1] != (NUM_CLASSES,):
        raise ModelSpecError(f"Model must end in {NUM_CLASSES} outputs, ends in {shapes[-1]}")
    return shapes


def model_spec(
    variant: str,
    qnode: Optional[QNodeConfig] = None,
    in_channels: int = DEFAULT_CHANNELS,
    image_size: int = DEFAULT_IMAGE_SIZE,
) -> ModelSpec:
    """The reference architecture for either variant.

    Conv(in->6,k5)-ReLU-Pool -> Conv(6->16,k5)-ReLU-Pool -> Conv(16->32,k3)-ReLU-Pool
    -> Flatten -> Linear(->64)-ReLU -> Linear(64->1) [-> QuantumNode] -> Linear(1->2) -> LogSoftmax
    """
    if variant not in VARIANTS:
        raise ModelSpecError(f"Unknown variant {variant!r}, expected one of {VARIANTS}")

    branch = [
        Conv2dSpec(in_ch=in_channels, out_ch=6, kernel=5),
        ReLUSpec(),
        MaxPool2dSpec(kernel=2, stride=2),
        Conv2dSpec(in_ch=6, out_ch=16, kernel=5),
        ReLUSpec(),
        MaxPool2dSpec(kernel=2, stride=2),
        Conv2dSpec(in_ch=16, out_ch=32, kernel=3),
        ReLUSpec(),
        MaxPool2dSpec(kernel=2, stride=2),
        FlattenSpec(),
    ]
    # width of the flattened branch depends on the image size
    shape = (in_channels, image_size, image_size)
    for layer in branch:
        shape = _next_shape(layer, shape)
    flat = shape[0]

    layers = branch + [
        LinearSpec(in_features=flat, out_features=64),
        ReLUSpec(),
        LinearSpec(in_features=64, out_features=1),
    ]
    if variant == QNN4EO:
        layers.append(QuantumNodeSpec(qnode=qnode or QNodeConfig()))
    layers += [LinearSpec(in_features=1, out_features=NUM_CLASSES), LogSoftmaxSpec()]

    spec = ModelSpec(variant=variant, layers=layers, input_shape=(in_channels, image_size, image_size))
    infer_shapes(spec)
    return spec
