"""Whole-image embedding, extraction, cover recovery and layer stacking."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blueprint import Blueprint, build_blueprint, reconstruct_image
from .errors import DimensionMismatch, EmptyStack, MessageTooLarge
from .pixel_core import BitMatrix, GrayImage, decode_bits, embed_bits


@dataclass(frozen=True)
class EmbedResult:
    watermarked: GrayImage
    blueprint: Blueprint
    message_rows: int
    message_cols: int


@dataclass(frozen=True)
class Layer:
    message_rows: int
    message_cols: int
    blueprint: Blueprint


@dataclass(frozen=True)
class LayerStack:
    """Per-layer message geometry and blueprints, first embedded layer first."""

    layers: tuple[Layer, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        shapes = {layer.blueprint.shape for layer in self.layers}
        if len(shapes) > 1:
            raise DimensionMismatch(f"layer blueprints disagree on shape: {sorted(shapes)}")
        for k, layer in enumerate(self.layers):
            check_capacity(layer.blueprint.shape, layer.message_rows, layer.message_cols, layer=k)

    @property
    def shape(self) -> tuple[int, int]:
        if not self.layers:
            raise EmptyStack("layer stack is empty")
        return self.layers[0].blueprint.shape

    def __len__(self):
        return len(self.layers)

    def __iter__(self):
        return iter(self.layers)


def check_capacity(shape, rows: int, cols: int, layer: int | None = None) -> None:
    h, w = shape
    where = "" if layer is None else f"layer {layer}: "
    if rows < 1 or cols < 1:
        raise MessageTooLarge(f"{where}message must be at least 1x1, got {rows}x{cols}", layer)
    if rows > h or cols > w - 1:
        raise MessageTooLarge(
            f"{where}{rows}x{cols} message does not fit a {h}x{w} cover "
            f"(at most {h}x{w - 1}; column 0 carries no payload)", layer)


def embed(cover: GrayImage, message: BitMatrix) -> EmbedResult:
    r, c = message.shape
    check_capacity(cover.shape, r, c)
    out = cover.pixels.copy()
    out[:r, 1:c + 1] = embed_bits(cover.pixels[:r, 1:c + 1], message.bits)
    return EmbedResult(GrayImage(out), build_blueprint(cover), r, c)


def extract_message(watermarked: GrayImage, message_rows: int, message_cols: int) -> BitMatrix:
    check_capacity(watermarked.shape, message_rows, message_cols)
    return BitMatrix(decode_bits(watermarked.pixels[:message_rows, 1:message_cols + 1]))


def recover_cover(watermarked: GrayImage, bp: Blueprint) -> GrayImage:
    return reconstruct_image(watermarked, bp)


def embed_multilayer(cover: GrayImage, messages: Sequence[BitMatrix]) -> tuple[GrayImage, LayerStack]:
    if not messages:
        raise EmptyStack("need at least one message")
    # validate every layer up front so nothing is embedded on failure
    for k, m in enumerate(messages):
        check_capacity(cover.shape, m.rows, m.cols, layer=k)
    current = cover
    layers = []
    for m in messages:
        res = embed(current, m)
        layers.append(Layer(res.message_rows, res.message_cols, res.blueprint))
        current = res.watermarked
    return current, LayerStack(tuple(layers))


def extract_multilayer(watermarked: GrayImage, stack: LayerStack) -> tuple[list[BitMatrix], GrayImage]:
    """Undo `embed_multilayer`, peeling layers last-in first-out."""
    if not len(stack):
        raise EmptyStack("layer stack is empty")
    if watermarked.shape != stack.shape:
        raise DimensionMismatch(f"image {watermarked.shape} vs stack {stack.shape}")
    current = watermarked
    messages = []
    for layer in reversed(stack.layers):
        messages.append(extract_message(current, layer.message_rows, layer.message_cols))
        current = recover_cover(current, layer.blueprint)
    messages.reverse()
    return messages, current
