"""This module contains the data models for error messages written to standard error."""

from pydantic import BaseModel, Field


class ErrorMessageData(BaseModel):
    """A data model representing an error message.

    Attributes:
        code (str): The code of the error message.
        message (str): The message of the error message.
        error_type (str): The type of the error message.
        description (str | None): The description of the error message (optional).
    """

    code: str = Field(min_length=1, max_length=50, examples=["CONFIG_ERROR"])
    error_type: str = Field(examples=["FATAL"])
    message: str = Field(min_length=1, max_length=500, examples=["Invalid configuration"])
    description: str | None = Field(
        default=None,
        min_length=1,
        max_length=2000,
        examples=["model: omega~ = -0.1 <= 0; it is appropriate to assume omega~ > 0."],
    )


class ErrorMessage(BaseModel):
    """A data model representing an error message.

    Attributes:
        exit_code (int): Process exit status.
        messages (list[ErrorMessageData] | None): The list of error message data objects (optional).
    """

    exit_code: int = Field(ge=1, le=3, examples=[2])
    messages: list[ErrorMessageData] | None = Field(default=None)


ErrorMessageData.model_rebuild()
ErrorMessage.model_rebuild()
