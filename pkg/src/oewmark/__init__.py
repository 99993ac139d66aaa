"""Reversible odd-even parity watermarking for 8-bit grayscale images."""
from .blueprint import Blueprint, build_blueprint, reconstruct_image
from .errors import *  # noqa: F401,F403
from .metrics import (QualityReport, correlation, diff_stats, expected_psnr, mse, psnr,
                      quality_report, worst_case_psnr)
from .pipeline import (EmbedResult, Layer, LayerStack, embed, embed_multilayer,
                       extract_message, extract_multilayer, recover_cover)
from .pixel_core import BitMatrix, GrayImage, decode_bit, decode_bits, embed_bit, embed_bits

__version__ = "0.1.0"
