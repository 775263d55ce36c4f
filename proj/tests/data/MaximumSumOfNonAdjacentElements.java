/**
 * Utility for computing the maximum sum of non-adjacent
 * elements in an integer array.

 * <p>No two chosen elements may be neighbors in the
 * input. The classic linear-time dynamic programming
 * solution walks the array once while keeping two
 * running candidates: the best sum that includes the
 * current element and the best sum that excludes it.
 */

public class MaximumSumOfNonAdjacentElements {

    /**
     * Computes the maximum obtainable sum of elements of
     * {@code values} such that no two selected elements
     * are adjacent in the array.

     * <p>An empty array yields a sum of zero, and
     * negative entries are never forced into the result:
     * selecting nothing from a hostile region is always
     * allowed by the recurrence.

     * @param values the input array, possibly empty
     * @return the maximum sum over all valid selections
     */
    public static int maxSum(int[] values) {
        if (values == null || values.length == 0) {
            return 0;
        }

        /*
         * include tracks the best sum of a selection that
         * uses the element at the current index, while
         * exclude tracks the best sum that skips it.
         */
        int include = values[0];   // best with values[0]
        int exclude = 0;           // best without it

        for (int i = 1; i < values.length; i++) {
            // Choosing values[i] forbids values[i - 1],
            // so the previous exclude is the only base.
            int nextInclude = exclude + values[i];

            // Skipping values[i] keeps the better of
            // the two previous candidates.
            int nextExclude = Math.max(include, exclude);

            include = nextInclude;
            exclude = nextExclude;
        }

        return Math.max(include, exclude); // best overall
    }

    /**
     * Demonstrates the computation on a handful of
     * sample arrays, including the empty array and the
     * all-negative array, and prints one line per case
     * in the form {@code case N: [values] -> sum}.
     */
    public static void main(String[] args) {
        int[][] samples = {
            { 3, 2, 7, 10 },
            { 3, 2, 5, 10, 7 },
            { 5, 5, 10, 100, 10, 5 },
            { -1, -2, -3 },
            {},
        };

        int caseNumber = 1;

        for (int[] sample : samples) {
            StringBuilder text = new StringBuilder("[");

            for (int i = 0; i < sample.length; i++) {
                if (i > 0) {
                    text.append(", ");
                }

                text.append(sample[i]);
            }

            text.append("]");

            System.out.print("case " + caseNumber + ": ");
            System.out.print(text);
            System.out.print(" -> ");
            System.out.println(maxSum(sample));

            caseNumber++;
        }
    }

}
