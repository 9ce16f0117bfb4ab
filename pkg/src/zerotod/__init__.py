"""Zero-shot end-to-end task-oriented dialogue framework.

A dialogue pipeline that turns user requests into free-text need statements,
interacts with tabular knowledge bases through a constrained query DSL, and
grounds its responses in the retrieved rows — plus modular runners for intent
classification, dialogue state tracking, and response generation, and a full
evaluation suite (JGA, Slot-F1, BLEU, Inform/Success, lexical diversity).
"""

__version__ = "0.1.0"
