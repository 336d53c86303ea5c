#################################################################################
#   Copyright Amazon.com, Inc. or its affiliates. All Rights Reserved.          #
#                                                                               #
#   Licensed under the Apache License, Version 2.0 (the "License").             #
#   You may not use this file except in compliance with the License.            #
#   You may obtain a copy of the License at                                     #
#                                                                               #
#       http://www.apache.org/licenses/LICENSE-2.0                              #
#                                                                               #
#   Unless required by applicable law or agreed to in writing, software         #
#   distributed under the License is distributed on an "AS IS" BASIS,           #
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.    #
#   See the License for the specific language governing permissions and         #
#   limitations under the License.                                              #
#################################################################################
"""Exceptions raised by the multiscale laboratory."""


class ConvergenceError(RuntimeError):
    """
    Raised when an iterative estimator exhausts its iteration budget.
    """
    def __init__(self, message: str, iterations: int) -> None:
        """
        Initialize ConvergenceError

        Args:
            message (str): what failed to converge.
            iterations (int): number of iterations performed.
        """
        super().__init__(message)
        self.iterations = int(iterations)
